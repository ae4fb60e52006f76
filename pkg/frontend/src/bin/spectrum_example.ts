import { main } from "../cli";

process.exit(main(["spectrum_example", ...process.argv.slice(2)]));
