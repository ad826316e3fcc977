import init, { tau_curve, cube_ratio_histogram, extremal_sets } from "./pkg/cubing_wasm.js";

const NS = "http://www.w3.org/2000/svg";
const $ = (id) => document.getElementById(id);
const val = (r) => r.num / r.den;
const frac = (r) => (r.den === 1 ? `${r.num}` : `${r.num}/${r.den}`);

function svg(w, h) {
  const s = document.createElementNS(NS, "svg");
  s.setAttribute("width", w);
  s.setAttribute("height", h);
  return s;
}

function el(parent, tag, attrs, text) {
  const e = document.createElementNS(NS, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  parent.appendChild(e);
  return e;
}

function run(out, f) {
  out.textContent = "";
  try {
    f();
  } catch (e) {
    out.innerHTML = `<p class="err">${e}</p>`;
  }
}

function plotTau() {
  const out = $("tau-out");
  run(out, () => {
    const data = JSON.parse(tau_curve(+$("tau-lo").value, +$("tau-hi").value));
    const pts = data.points;
    const W = 840, H = 300, P = 36;
    const s = svg(W, H);
    const xmin = pts[0].n, xmax = Math.max(pts[pts.length - 1].n, xmin + 1);
    const x = (n) => P + ((n - xmin) / (xmax - xmin)) * (W - 2 * P);
    const y = (t) => H - P - t * (H - 2 * P);
    el(s, "line", { x1: P, y1: y(0), x2: W - P, y2: y(0), stroke: "#888" });
    el(s, "line", { x1: P, y1: y(0), x2: P, y2: y(1), stroke: "#888" });
    for (const t of [0, 0.25, 0.5, 0.75, 1]) el(s, "text", { x: 4, y: y(t) + 3 }, t);
    const b = val(data.bound);
    el(s, "line", { x1: P, y1: y(b), x2: W - P, y2: y(b), stroke: "#c33", "stroke-dasharray": "4 3" });
    el(s, "text", { x: W - P + 2, y: y(b) + 3, fill: "#c33" }, frac(data.bound));
    el(s, "polyline", {
      points: pts.map((p) => `${x(p.n)},${y(val(p.tau))}`).join(" "),
      fill: "none",
      stroke: "#36c",
    });
    for (const p of pts) {
      const c = el(s, "circle", { cx: x(p.n), cy: y(val(p.tau)), r: 2.5, fill: "#36c" });
      el(c, "title", {}, `n=${p.n}  T=${p.t}  tau=${frac(p.tau)}`);
      if (pts.length <= 40 || p.n % 5 === 0) el(s, "text", { x: x(p.n) - 5, y: H - P + 14 }, p.n);
    }
    out.appendChild(s);
  });
}

function plotHistogram() {
  const out = $("hist-out");
  run(out, () => {
    const data = JSON.parse(cube_ratio_histogram($("hist-name").value.trim()));
    const W = 840, H = 260, P = 36;
    const s = svg(W, H);
    const peak = Math.max(...data.bins.map((b) => b.automorphisms));
    const bw = (W - 2 * P) / data.bins.length;
    data.bins.forEach((b, i) => {
      const h = (b.automorphisms / peak) * (H - 2 * P);
      const r = el(s, "rect", { x: P + i * bw + 2, y: H - P - h, width: bw - 4, height: h, fill: val(b.ratio) > 0.5 ? "#c63" : "#69c" });
      el(r, "title", {}, `${b.automorphisms} automorphisms with |T| = ${b.size}`);
      el(s, "text", { x: P + i * bw + bw / 2 - 10, y: H - P + 14 }, frac(b.ratio));
      el(s, "text", { x: P + i * bw + bw / 2 - 8, y: H - P - h - 4 }, b.automorphisms);
    });
    const p = document.createElement("p");
    p.textContent = `|G| = ${data.order}, |Aut(G)| = ${data.automorphisms}, maximum ratio ${frac(data.max)}`;
    out.append(p, s);
  });
}

function drawSets() {
  const out = $("ext-out");
  run(out, () => {
    const data = JSON.parse(extremal_sets(+$("ext-n").value, +$("ext-size").value));
    const p = document.createElement("p");
    p.textContent = `T(${data.n}) = ${data.t}; ${data.sets.length} classes of size ${data.size} up to dilation, ${data.raw_count} sets containing 0`;
    out.appendChild(p);
    const grid = document.createElement("div");
    grid.className = "sets";
    const R = 60, C = 75, n = data.n;
    const at = (k, r) => [C + r * Math.sin((2 * Math.PI * k) / n), C - r * Math.cos((2 * Math.PI * k) / n)];
    for (const set of data.sets.slice(0, 48)) {
      const fig = document.createElement("figure");
      const s = svg(2 * C, 2 * C);
      el(s, "circle", { cx: C, cy: C, r: R, fill: "none", stroke: "#ccc" });
      const inSet = new Set(set);
      el(s, "polygon", { points: set.map((k) => at(k, R).join(",")).join(" "), fill: "#36c2", stroke: "#36c" });
      for (let k = 0; k < n; k++) {
        const [cx, cy] = at(k, R);
        el(s, "circle", { cx, cy, r: inSet.has(k) ? 4 : 2, fill: inSet.has(k) ? "#36c" : "#aaa" });
        if (inSet.has(k)) {
          const [tx, ty] = at(k, R + 10);
          el(s, "text", { x: tx - 4, y: ty + 3 }, k);
        }
      }
      const cap = document.createElement("figcaption");
      cap.textContent = `{${set.join(", ")}}`;
      fig.append(s, cap);
      grid.appendChild(fig);
    }
    out.appendChild(grid);
  });
}

await init();
$("tau-go").onclick = plotTau;
$("hist-go").onclick = plotHistogram;
$("ext-go").onclick = drawSets;
plotTau();
plotHistogram();
drawSets();
