import init, { slope_field, per_order, tree_counts } from "./pkg/anosov_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawField() {
  const status = $("f-status");
  status.textContent = "computing...";
  status.className = "";
  // let the status paint before the synchronous call
  setTimeout(() => {
    try {
      const t0 = performance.now();
      const pts = JSON.parse(slope_field(num("f-n"), num("f-eps"), num("f-order"), num("f-pmax"), "stem-minus-only"));
      const cv = $("field");
      const ctx = cv.getContext("2d");
      ctx.clearRect(0, 0, cv.width, cv.height);
      const scale = cv.width / (2 * Math.PI);
      const len = 0.4 * cv.width / num("f-n");
      const maxSlope = Math.max(...pts.map((p) => Math.abs(p.slope)), 1e-300);
      for (const p of pts) {
        const d = p.tangent;
        const x = p.theta1 * scale;
        const y = cv.height - p.theta2 * scale;
        const hue = 220 - 220 * Math.abs(p.slope) / maxSlope;
        ctx.strokeStyle = `hsl(${hue}, 70%, 45%)`;
        ctx.beginPath();
        ctx.moveTo(x - len * d[0], y + len * d[1]);
        ctx.lineTo(x + len * d[0], y - len * d[1]);
        ctx.stroke();
      }
      status.textContent = `${pts.length} points, max |slope| ${maxSlope.toExponential(3)}, ${(performance.now() - t0).toFixed(0)} ms`;
    } catch (e) {
      status.textContent = String(e);
      status.className = "err";
    }
  }, 10);
}

function showTable() {
  const out = $("table");
  try {
    const r = JSON.parse(per_order(num("t-x"), num("t-y"), num("t-eps"), num("t-order"), num("t-pmax"), $("t-mode").value));
    const rows = r.per_order
      .map((o) => `<tr><td>${o.k}</td><td>${o.value.toExponential(10)}</td><td>${o.tail_bound.toExponential(2)}</td></tr>`)
      .join("");
    out.innerHTML =
      `<table><tr><th>k</th><th>Val[q_k(0)]</th><th>tail bound</th></tr>${rows}</table>` +
      `<p>series slope ${r.slope.toExponential(10)}<br>oracle slope ${r.oracle_slope.toExponential(10)}<br>` +
      `difference ${r.abs_err.toExponential(3)}</p>`;
  } catch (e) {
    out.innerHTML = `<p class="err">${e}</p>`;
  }
}

function showCounts() {
  const out = $("counts");
  try {
    const rows = JSON.parse(tree_counts(num("c-k")))
      .map((r) => `<tr><td>${r.k}</td><td>${r.shapes}</td><td>${r.sign_trees}</td><td>${r.derivative_keys}</td></tr>`)
      .join("");
    out.innerHTML = `<table><tr><th>k</th><th>shapes</th><th>signed trees</th><th>derivative keys</th></tr>${rows}</table>`;
  } catch (e) {
    out.innerHTML = `<p class="err">${e}</p>`;
  }
}

await init();
$("f-go").onclick = drawField;
$("t-go").onclick = showTable;
$("c-go").onclick = showCounts;
drawField();
showTable();
showCounts();
