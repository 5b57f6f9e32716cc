// Expects the output of `wasm-pack build --target web` in ./pkg.
import init, { classify, centralizer, packet } from "./pkg/arthur_kit_web.js";

const $ = (id) => document.getElementById(id);

async function load(name) {
  if (!name) return;
  const res = await fetch(`catalog/${name}.json`);
  $("parameter").value = res.ok ? await res.text() : `// could not load ${name}`;
}

function show(text) {
  $("out").textContent = text;
}

await init();
$("example").addEventListener("change", (e) => load(e.target.value));
$("classify").addEventListener("click", () => show(classify($("parameter").value)));
$("centralizer").addEventListener("click", () => show(centralizer($("parameter").value)));
$("packet").addEventListener("click", () =>
  show(packet($("parameter").value, $("level").value, $("epsilon").value)));
await load($("example").value);
