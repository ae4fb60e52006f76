import { main } from "../cli";

process.exit(main(["runtime_box", ...process.argv.slice(2)]));
