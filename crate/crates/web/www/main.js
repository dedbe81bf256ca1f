import init, { roots, atlas, solve } from "./pkg/superquant_web.js";

const $ = (id) => document.getElementById(id);

function show(text, isError = false) {
  $("output").textContent = text;
  $("output").className = isError ? "error" : "";
}

function guard(f) {
  return () => {
    try {
      f();
    } catch (e) {
      show(String(e), true);
    }
  };
}

await init();

$("roots").addEventListener("click", guard(() => {
  show(roots($("config").value));
}));

$("atlas").addEventListener("click", guard(() => {
  const n = Math.max(1, Math.min(8, Number($("box").value) || 3));
  $("picture").innerHTML = atlas($("config").value, n);
  show("");
}));

$("solve").addEventListener("click", guard(() => {
  show(solve($("config").value, $("lambda").value));
}));
