import { main } from "../cli";

process.exit(main(["rmse_vs_rho", ...process.argv.slice(2)]));
