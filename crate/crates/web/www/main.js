import init, { describe, classify, verify } from "./pkg/sandwich_tn_web.js";

const out = document.getElementById("out");
const alpha = () => document.getElementById("alpha").value;

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

function table(rows, head) {
  const t = el("table");
  if (head) {
    const tr = el("tr");
    head.forEach((h) => tr.appendChild(el("th", h)));
    t.appendChild(tr);
  }
  rows.forEach((r) => {
    const tr = el("tr");
    r.forEach((c) => tr.appendChild(el("td", String(c))));
    t.appendChild(tr);
  });
  return t;
}

function header(ctx) {
  let s = `alpha = ${ctx.normalized}, l = ${ctx.l}, blocks = ${ctx.blocks}`;
  if (ctx.changed) s += ` (normalized from ${ctx.input})`;
  return el("p", s);
}

function showCounts(v) {
  out.replaceChildren(header(v.context));
  out.appendChild(el("h3", "Closed form"));
  out.appendChild(table(v.counts.formula_summands.map((s) => [s.label, s.value]).concat([["total", v.counts.formula]])));
  out.appendChild(el("h3", "Family parameter counts"));
  out.appendChild(table(Object.entries(v.counts.per_family).concat([["total", v.counts.family_total]])));
  out.appendChild(el("p", `idempotents: ${v.idempotents}`));
}

function showLists(v) {
  out.replaceChildren(header(v.context));
  for (const key of ["isolated", "completely_isolated", "left_convex", "right_convex", "convex"]) {
    const d = el("details");
    d.open = key !== "isolated";
    d.appendChild(el("summary", `${key.replace("_", " ")}: ${v[key].length}`));
    d.appendChild(table(v[key].map((f) => [f.cardinality, f.descriptor]), ["size", "set"]));
    out.appendChild(d);
  }
}

function showReport(v) {
  out.replaceChildren(el("p", `alpha = ${v.alpha}, n = ${v.n}, l = ${v.l}`));
  out.appendChild(el("h3", `verdict: ${v.verdict}`));
  const rows = [["isolated", v.isolated.status, v.isolated.method, v.isolated.classification_count, v.isolated.oracle_count ?? "-"]];
  for (const [k, s] of Object.entries(v.lists)) rows.push([k, s.status, s.method, s.expected, s.oracle ?? "-"]);
  out.appendChild(table(rows, ["section", "status", "method", "listed", "oracle"]));
  out.appendChild(el("p", `closed form ${v.counts.formula}, enumerated ${v.counts.enumerated}` +
    (v.counts.formula_matches ? "" : " (closed form disagrees)")));
}

function handler(fn, show) {
  return () => {
    try {
      show(JSON.parse(fn(alpha())));
    } catch (e) {
      out.replaceChildren(el("p", e.message ?? String(e), "err"));
    }
  };
}

await init();
document.getElementById("describe").onclick = handler(describe, showCounts);
document.getElementById("classify").onclick = handler(classify, showLists);
document.getElementById("verify").onclick = handler(verify, showReport);
document.getElementById("describe").click();
