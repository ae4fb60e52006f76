import { main } from "../cli";

process.exit(main(["rmse_vs_dtheta", ...process.argv.slice(2)]));
