import init, { exploreProfile, exploreProbabilities, replay, bundledReplay } from "./pkg/lucky13_wasm.js";

const RANGE_COLORS = ["#c7c7c7", "#9ecae1", "#6baed6", "#3182bd", "#08519c"];
const $ = (id) => document.getElementById(id);
const money = (x) =>
  (x < 0 ? "-$" : "$") + Math.abs(x).toLocaleString("en-US", { minimumFractionDigits: 2, maximumFractionDigits: 2 });
const betLabel = (r) => (r.number == null ? r.range : `${r.range}/${r.number}`);

function rangeIndex(k) {
  if (k === 0) return 0;
  if (k === 13) return 4;
  return Math.floor((k - 1) / 3);
}

function prepare(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "12px system-ui";
  return ctx;
}

function drawPmf(canvas, pmf, highlight) {
  const ctx = prepare(canvas);
  const pad = 28;
  const w = (canvas.width - 2 * pad) / 14;
  const top = Math.max(...pmf) || 1;
  pmf.forEach((p, k) => {
    const h = (p / top) * (canvas.height - 2 * pad);
    ctx.fillStyle = highlight.includes(k) ? "#e6550d" : RANGE_COLORS[rangeIndex(k)];
    ctx.fillRect(pad + k * w + 2, canvas.height - pad - h, w - 4, h);
    ctx.fillStyle = "#222";
    ctx.fillText(String(k), pad + k * w + w / 2 - 4, canvas.height - pad + 14);
    ctx.fillText(p.toFixed(3), pad + k * w + 2, canvas.height - pad - h - 4);
  });
}

function drawLines(canvas, series) {
  const ctx = prepare(canvas);
  const pad = 48;
  const top = Math.max(1, ...series.flatMap((s) => s.points.map((p) => p.expected_winnings)));
  const x = (i) => pad + (i / 13) * (canvas.width - 2 * pad);
  const y = (v) => canvas.height - pad + 20 - (v / top) * (canvas.height - pad - 10);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, y(0));
  ctx.lineTo(canvas.width - pad, y(0));
  ctx.stroke();
  ctx.fillStyle = "#222";
  for (let i = 0; i <= 13; i++) ctx.fillText(String(i), x(i) - 3, y(0) + 14);
  ctx.fillText(money(top), 2, y(top) + 4);
  series.forEach((s, n) => {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.points.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, x(p.reveal_index), y(p.expected_winnings)));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, canvas.width - pad - 120, 16 + 14 * n);
  });
}

function describe(rec) {
  const ties = rec.ties.map(betLabel).join(", ") || "none";
  return `bet ${betLabel(rec)}  P(range) ${rec.win_probability.toFixed(4)}  ` +
    `P(number) ${rec.number_hit_probability.toFixed(4)}  E[winnings] ${money(rec.expected_winnings)}  ties: ${ties}`;
}

function guard(out, f) {
  try {
    out.classList.remove("error");
    f();
  } catch (e) {
    out.classList.add("error");
    out.textContent = e.message ?? String(e);
  }
}

function runProfile() {
  const out = $("profile-out");
  guard(out, () => {
    const v = JSON.parse(exploreProfile(+$("sure").value, +$("unsure").value, +$("guess").value, $("utility").value));
    drawPmf($("profile-chart"), v.pmf, v.recommendation.number == null ? [13] : [v.recommendation.number]);
    out.textContent = [
      `mean ${v.mean.toFixed(4)}  most likely ${v.argmax.join(", ")}`,
      v.ranges.map((r) => `${r.range}: ${r.probability.toFixed(4)}`).join("  "),
      "recommended: " + describe(v.recommendation),
      "best pair:   " + describe(v.joint),
    ].join("\n");
  });
}

function runProbs() {
  const out = $("prob-out");
  guard(out, () => {
    const v = JSON.parse(exploreProbabilities($("prob-input").value, "winprob"));
    drawPmf($("prob-chart"), v.pmf, v.argmax);
    out.textContent = [
      `mean ${v.mean.toFixed(4)}  Darroch modes {${v.darroch_modes.join(",")}}  exact mode ${v.argmax.join(", ")}`,
      "recommended: " + describe(v.recommendation),
    ].join("\n");
  });
}

function runReplay() {
  const out = $("replay-out");
  guard(out, () => {
    const v = JSON.parse(replay(bundledReplay($("replay-case").value), $("what-if").value));
    const series = [{ label: betLabel(v.bet), color: "#3182bd", points: v.trajectory }];
    if (v.what_if) series.push({ label: betLabel(v.what_if_bet), color: "#e6550d", points: v.what_if });
    drawLines($("replay-chart"), series);
    const lines = v.trajectory.map((p) => `${p.reveal_index}\t${p.correct_so_far}\t${money(p.expected_winnings)}`);
    v.offers.forEach((o) =>
      lines.push(`offer ${money(o.offer)} after reveal ${o.after_reveal}: ${o.advice} (margin ${money(o.margin)})`));
    if (v.realized_payoff != null) lines.push(`won ${money(v.realized_payoff)}`);
    out.textContent = lines.join("\n");
  });
}

await init();
["sure", "unsure", "guess", "utility"].forEach((id) => $(id).addEventListener("input", runProfile));
$("prob-run").addEventListener("click", runProbs);
$("replay-run").addEventListener("click", runReplay);
$("replay-case").addEventListener("change", runReplay);
runProfile();
runProbs();
runReplay();
