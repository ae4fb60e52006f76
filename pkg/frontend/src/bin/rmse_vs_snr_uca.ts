import { main } from "../cli";

process.exit(main(["rmse_vs_snr_uca", ...process.argv.slice(2)]));
