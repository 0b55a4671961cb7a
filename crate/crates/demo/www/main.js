import init, { ColoringDemo, msf_trace, cc_trace } from "./pkg/dyngraph_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// A fixed qualitative palette; colors beyond it wrap with a lighter shade.
const PALETTE = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
  "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#800000",
  "#aaffc3", "#808000", "#000075"];

function colorFor(c) {
  const base = PALETTE[(c - 1) % PALETTE.length];
  return c > PALETTE.length ? base + "99" : base;
}

let demo = null;
let layout = [];
let lastPath = [];
let selected = null;
let timer = null;

function resetColoring() {
  stopRun();
  try {
    demo = new ColoringDemo(num("col-n"), num("col-delta"), num("col-seed"));
  } catch (e) {
    $("col-stats").textContent = String(e);
    return;
  }
  const n = demo.n();
  const cx = 320, cy = 240, r = 210;
  layout = Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / n;
    return [cx + r * Math.cos(a), cy + r * Math.sin(a)];
  });
  lastPath = [];
  selected = null;
  drawColoring();
}

function drawColoring() {
  const ctx = $("col-canvas").getContext("2d");
  ctx.clearRect(0, 0, 640, 480);
  const edges = demo.edges();
  ctx.strokeStyle = "#bbb";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (let i = 0; i < edges.length; i += 2) {
    const [a, b] = [layout[edges[i]], layout[edges[i + 1]]];
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
  }
  ctx.stroke();
  const colors = demo.colors();
  const onPath = new Set(lastPath);
  layout.forEach(([x, y], v) => {
    ctx.beginPath();
    ctx.arc(x, y, 7, 0, 2 * Math.PI);
    ctx.fillStyle = colorFor(colors[v]);
    ctx.fill();
    ctx.lineWidth = v === selected ? 3 : onPath.has(v) ? 2.5 : 1;
    ctx.strokeStyle = v === selected ? "#000" : onPath.has(v) ? "#222" : "#666";
    ctx.stroke();
  });
  $("col-stats").textContent =
    `edges ${demo.edge_count()}   palette 1..${demo.delta() + 1}   ` +
    `conflicts ${demo.conflicts()}   recolorings ${demo.recolorings()}   ` +
    `work ${demo.work()}   last path ${lastPath.length ? lastPath.join(" > ") : "-"}   ` +
    `audit violations ${demo.audit_violations()}`;
}

function stepColoring() {
  const out = demo.step(num("col-bias"));
  if (out.length >= 3 && out[0] === 1) {
    lastPath = Array.from(out.slice(3));
  }
  drawColoring();
}

function stopRun() {
  if (timer !== null) {
    clearInterval(timer);
    timer = null;
    $("col-run").textContent = "Run";
  }
}

function toggleRun() {
  if (timer !== null) {
    stopRun();
  } else {
    timer = setInterval(stepColoring, 60);
    $("col-run").textContent = "Stop";
  }
}

function clickColoring(ev) {
  const rect = ev.target.getBoundingClientRect();
  const [x, y] = [ev.clientX - rect.left, ev.clientY - rect.top];
  const hit = layout.findIndex(([vx, vy]) => (vx - x) ** 2 + (vy - y) ** 2 <= 100);
  if (hit < 0) {
    selected = null;
  } else if (selected === null || selected === hit) {
    selected = selected === hit ? null : hit;
  } else {
    const [u, v] = [selected, hit];
    selected = null;
    if (!demo.delete(u, v)) {
      try {
        lastPath = Array.from(demo.insert(u, v));
      } catch (e) {
        $("col-stats").textContent = String(e);
        return;
      }
    }
  }
  drawColoring();
}

// Plots records of `width` values: series 0 is the estimate, series 1 the
// exact value; `band(rec)` gives the allowed interval around the exact value.
function plot(canvasId, trace, width, band) {
  const canvas = $(canvasId);
  const ctx = canvas.getContext("2d");
  const [w, h, pad] = [canvas.width, canvas.height, 24];
  ctx.clearRect(0, 0, w, h);
  const recs = [];
  for (let i = 0; i + width <= trace.length; i += width) recs.push(trace.slice(i, i + width));
  if (!recs.length) return recs;
  let lo = Infinity, hi = -Infinity;
  for (const r of recs) {
    const [a, b] = band(r);
    lo = Math.min(lo, a, r[0]);
    hi = Math.max(hi, b, r[0]);
  }
  if (hi === lo) hi = lo + 1;
  const X = (i) => pad + ((w - 2 * pad) * i) / Math.max(1, recs.length - 1);
  const Y = (v) => h - pad - ((h - 2 * pad) * (v - lo)) / (hi - lo);
  ctx.fillStyle = "#e4e4e4";
  ctx.beginPath();
  recs.forEach((r, i) => (i ? ctx.lineTo(X(i), Y(band(r)[1])) : ctx.moveTo(X(i), Y(band(r)[1]))));
  for (let i = recs.length - 1; i >= 0; i--) ctx.lineTo(X(i), Y(band(recs[i])[0]));
  ctx.fill();
  const line = (k, style) => {
    ctx.strokeStyle = style;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    recs.forEach((r, i) => (i ? ctx.lineTo(X(i), Y(r[k])) : ctx.moveTo(X(i), Y(r[k]))));
    ctx.stroke();
  };
  line(1, "#000");
  line(0, "#1f63d6");
  ctx.fillStyle = "#444";
  ctx.fillText(hi.toFixed(1), 2, pad - 6);
  ctx.fillText(lo.toFixed(1), 2, h - 6);
  return recs;
}

function traceMsf() {
  const eps = num("msf-eps");
  let trace;
  try {
    trace = msf_trace(num("msf-n"), eps, num("msf-w"), num("msf-ops"), num("msf-seed"));
  } catch (e) {
    $("msf-stats").textContent = String(e);
    return;
  }
  const recs = plot("msf-canvas", trace, 2, (r) => [(1 - eps) * r[1], (1 + eps) * r[1]]);
  const worst = recs.reduce((m, r) => (r[1] > 0 ? Math.max(m, Math.abs(r[0] / r[1] - 1)) : m), 0);
  $("msf-stats").textContent = `${recs.length} updates   worst relative error ${worst.toFixed(4)}`;
}

function traceCc() {
  let trace;
  try {
    trace = cc_trace(num("cc-n"), num("cc-eps"), num("cc-p"), num("cc-ops"), num("cc-seed"));
  } catch (e) {
    $("cc-stats").textContent = String(e);
    return;
  }
  const recs = plot("cc-canvas", trace, 3, (r) => [r[1] - r[2], r[1] + r[2]]);
  const inside = recs.filter((r) => Math.abs(r[0] - r[1]) <= r[2]).length;
  $("cc-stats").textContent =
    `${recs.length} updates   within ε·nis at ${((100 * inside) / recs.length).toFixed(1)}%`;
}

await init();
$("col-reset").onclick = resetColoring;
$("col-step").onclick = stepColoring;
$("col-run").onclick = toggleRun;
$("col-canvas").onclick = clickColoring;
$("msf-go").onclick = traceMsf;
$("cc-go").onclick = traceCc;
resetColoring();
traceMsf();
traceCc();
