// Built with: wasm-bindgen --target web --out-dir www/pkg <archord_web.wasm>
import init, { holder, separating_power, clo_embed } from "./pkg/archord_web.js";

const $ = (id) => document.getElementById(id);
const show = (id, text) => {
  $(id).textContent = JSON.stringify(JSON.parse(text), null, 2);
};

await init();

$("h-run").onclick = () =>
  show("h-out", holder($("decls").value, $("h-type").value, $("h-t").value, $("h-eps").value));

$("s-run").onclick = () =>
  show("s-out", separating_power($("decls").value, $("s-alpha").value, $("s-beta").value, Number($("s-cap").value)));

$("c-run").onclick = () =>
  show("c-out", clo_embed($("c-ko").value, $("c-kc").value, $("c-lo").value, $("c-lc").value));
