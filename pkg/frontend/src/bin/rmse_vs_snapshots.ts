import { main } from "../cli";

process.exit(main(["rmse_vs_snapshots", ...process.argv.slice(2)]));
