import { main } from "../cli";

process.exit(main(["rmse_vs_snr", ...process.argv.slice(2)]));
