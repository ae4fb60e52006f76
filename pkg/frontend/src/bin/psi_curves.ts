import { main } from "../cli";

process.exit(main(["psi_curves", ...process.argv.slice(2)]));
