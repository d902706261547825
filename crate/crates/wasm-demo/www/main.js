import init, { refineColors, isotest, eginCompare } from "./pkg/edgewl_wasm_demo.js";

const NODE_PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
  "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#2f4b7c", "#a05195"];
const EDGE_PALETTE = ["#555", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

const cycle = (n, label) => ({
  node_features: Array.from({ length: n }, () => [1.0]),
  edges: Array.from({ length: n }, (_, i) => [i, (i + 1) % n]),
  edge_features: Array.from({ length: n }, (_, i) => label(i)),
});

const PRESETS = {
  triangles: [
    cycle(3, () => [1.0, 0.0]),
    cycle(3, (i) => (i === 2 ? [0.0, 1.0] : [1.0, 0.0])),
  ],
  permuted: [
    {
      node_features: [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 0.0]],
      edges: [[0, 1], [1, 2], [2, 3], [0, 2]],
      edge_features: [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
    },
    {
      node_features: [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
      edges: [[2, 3], [3, 0], [0, 1], [2, 0]],
      edge_features: [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
    },
  ],
  hexagon: [
    cycle(6, () => [1.0]),
    {
      node_features: Array.from({ length: 6 }, () => [1.0]),
      edges: [[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]],
      edge_features: Array.from({ length: 6 }, () => [1.0]),
    },
  ],
};

const $ = (id) => document.getElementById(id);
let trace = null;

function showError(e) {
  $("error").textContent = e ? String(e) : "";
}

function readGraphs() {
  return [JSON.parse($("json-a").value), JSON.parse($("json-b").value)];
}

function argmax(xs) {
  let best = 0;
  xs.forEach((x, i) => { if (x > xs[best]) best = i; });
  return best;
}

function draw(svg, g, colors) {
  const n = g.node_features.length;
  const w = svg.clientWidth || 400, h = svg.clientHeight || 240;
  const r = Math.min(w, h) / 2 - 24;
  const pos = Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
    return [w / 2 + r * Math.cos(a), h / 2 + r * Math.sin(a)];
  });
  const ns = "http://www.w3.org/2000/svg";
  svg.replaceChildren();
  g.edges.forEach(([i, j], e) => {
    const line = document.createElementNS(ns, "line");
    const feat = g.edge_features[e] || [];
    line.setAttribute("x1", pos[i][0]); line.setAttribute("y1", pos[i][1]);
    line.setAttribute("x2", pos[j][0]); line.setAttribute("y2", pos[j][1]);
    line.setAttribute("stroke", EDGE_PALETTE[argmax(feat) % EDGE_PALETTE.length]);
    line.setAttribute("stroke-width", 3);
    svg.append(line);
  });
  pos.forEach(([x, y], i) => {
    const c = document.createElementNS(ns, "circle");
    c.setAttribute("cx", x); c.setAttribute("cy", y); c.setAttribute("r", 13);
    c.setAttribute("fill", colors ? NODE_PALETTE[colors[i] % NODE_PALETTE.length] : "#ddd");
    c.setAttribute("stroke", "#333");
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", x); label.setAttribute("y", y + 4);
    label.setAttribute("text-anchor", "middle"); label.setAttribute("font-size", 11);
    label.textContent = colors ? colors[i] : i;
    svg.append(c, label);
  });
}

function redraw() {
  let graphs;
  try {
    graphs = readGraphs();
    showError();
  } catch (e) {
    showError(e);
    return;
  }
  const round = Number($("round").value);
  const colors = (k) => (trace ? trace.graphs[k].node_colors[round] : null);
  draw($("svg-a"), graphs[0], colors(0));
  draw($("svg-b"), graphs[1], colors(1));
  const width = Math.max(...graphs.flatMap((g) => g.edge_features.map((f) => f.length)), 1);
  $("legend").innerHTML = "Edge labels:" + Array.from({ length: width }, (_, i) =>
    `<span style="background:${EDGE_PALETTE[i % EDGE_PALETTE.length]}"></span>${i}`).join("");
}

function loadPreset(name) {
  const [a, b] = PRESETS[name];
  $("json-a").value = JSON.stringify(a, null, 1);
  $("json-b").value = JSON.stringify(b, null, 1);
  trace = null;
  $("round").max = 0; $("round").value = 0; $("round-label").textContent = "0";
  ["refine-out", "iso-out", "egin-out"].forEach((id) => ($(id).innerHTML = ""));
  redraw();
}

const verdict = (d) => (d ? `<span class="yes">distinguishable</span>` : `<span class="no">indistinguishable</span>`);

function run(action) {
  try {
    showError();
    action();
  } catch (e) {
    showError(e);
  }
}

function onRefine() {
  const [a, b] = readGraphs();
  trace = JSON.parse(refineColors(JSON.stringify([a, b]), $("variant").value));
  const last = trace.iterations_to_stable;
  $("round").max = last; $("round").value = last; $("round-label").textContent = last;
  const same = trace.graphs[0].class === trace.graphs[1].class;
  $("refine-out").innerHTML = `${trace.variant}: stable after ${last} round(s); ` +
    `signatures ${same ? "equal" : "differ"} (${verdict(!same)}).`;
  redraw();
}

function onIsotest() {
  const [a, b] = readGraphs();
  const r = JSON.parse(isotest(JSON.stringify(a), JSON.stringify(b)));
  const rows = Object.entries(r.distinguishable).map(([v, d]) => `<tr><td>${v}</td><td>${verdict(d)}</td></tr>`);
  rows.push(`<tr><td>oracle</td><td>${r.oracle.status}</td></tr>`);
  $("iso-out").innerHTML = `<table>${rows.join("")}</table>`;
}

function onEgin() {
  const [a, b] = readGraphs();
  const seed = Math.max(0, Number($("seed").value) | 0);
  const r = JSON.parse(eginCompare(JSON.stringify(a), JSON.stringify(b), seed));
  const fmt = (xs) => xs.map((x) => x.toFixed(3)).join(", ");
  const rows = r.models.map((m) =>
    `<tr><td>${m.model}</td><td>${m.max_embedding_diff.toExponential(2)}</td>` +
    `<td>${fmt(m.logits_a)}</td><td>${fmt(m.logits_b)}</td></tr>`);
  $("egin-out").innerHTML = `<table><tr><th>model</th><th>max |embedding A - B|</th>` +
    `<th>logits A</th><th>logits B</th></tr>${rows.join("")}</table>`;
}

await init();
document.querySelectorAll("[data-preset]").forEach((b) => b.addEventListener("click", () => loadPreset(b.dataset.preset)));
$("refine").addEventListener("click", () => run(onRefine));
$("isotest").addEventListener("click", () => run(onIsotest));
$("egin").addEventListener("click", () => run(onEgin));
$("round").addEventListener("input", () => { $("round-label").textContent = $("round").value; redraw(); });
["json-a", "json-b"].forEach((id) => $(id).addEventListener("input", () => { trace = null; redraw(); }));
loadPreset("triangles");
