import init, { FireDemo, fw_weight_map, branching_factor } from "./pkg/fireplan_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;

function drawFire() {
  const canvas = $("grid");
  const ctx = canvas.getContext("2d");
  const k = demo.width();
  const cell = canvas.width / k;
  const burning = demo.burning();
  const fuel = demo.fuel();
  const maxFuel = Math.max(1, ...fuel);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let x = 0; x < k * k; x++) {
    const col = x % k;
    const row = Math.floor(x / k);
    const f = fuel[x] / maxFuel;
    if (burning[x]) {
      ctx.fillStyle = `rgb(${150 + 105 * f}, ${40 * (1 - f)}, 0)`;
    } else if (fuel[x] < maxFuel) {
      ctx.fillStyle = "#999";
    } else {
      ctx.fillStyle = "#6a6";
    }
    // row 0 is the bottom row
    ctx.fillRect(col * cell, (k - 1 - row) * cell, cell - 1, cell - 1);
  }
  ctx.strokeStyle = "#00f";
  ctx.lineWidth = 2;
  for (const x of demo.last_action()) {
    const col = x % k;
    const row = Math.floor(x / k);
    ctx.beginPath();
    ctx.arc((col + 0.5) * cell, (k - 1 - row + 0.5) * cell, cell / 3, 0, 2 * Math.PI);
    ctx.stroke();
  }
  const burningCount = burning.reduce((a, b) => a + b, 0);
  $("status").textContent =
    `step ${demo.steps()}  burning ${burningCount}  reward ${demo.total_reward().toFixed(1)}` +
    (demo.done() ? "  (fire out)" : "");
}

function newFire() {
  if (demo) demo.free();
  demo = new FireDemo(+$("k").value, +$("teams").value, BigInt($("seed").value));
  drawFire();
}

function step() {
  demo.step($("policy").value);
  drawFire();
}

function runToEnd() {
  const tick = () => {
    if (demo.done()) return;
    step();
    setTimeout(tick, 30);
  };
  tick();
}

function showWeights() {
  const k = +$("wk").value;
  const w = fw_weight_map(k);
  const canvas = $("wgrid");
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / k;
  const lo = Math.min(...w);
  const hi = Math.max(...w);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let x = 0; x < w.length; x++) {
    // priority is -W, so the most negative weight is the brightest
    const t = hi > lo ? (hi - w[x]) / (hi - lo) : 0.5;
    const v = Math.round(255 * t);
    ctx.fillStyle = `rgb(${v}, ${v}, ${Math.round(80 + 100 * (1 - t))})`;
    ctx.fillRect((x % k) * cell, (k - 1 - Math.floor(x / k)) * cell, cell - 1, cell - 1);
  }
}

function showBranching() {
  try {
    const [exact, stirling] = branching_factor(+$("bn").value, +$("bi").value);
    $("bf-out").textContent = `N^I / I! = ${exact.toExponential(4)}   Stirling = ${stirling.toExponential(4)}`;
  } catch (e) {
    $("bf-out").textContent = String(e);
  }
}

await init();
$("new").onclick = newFire;
$("step").onclick = step;
$("run").onclick = runToEnd;
$("weights").onclick = showWeights;
$("bf").onclick = showBranching;
newFire();
showWeights();
showBranching();
