import { Workbench } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
const bench = new Workbench(root);
void bench.start();
