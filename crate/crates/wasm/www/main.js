import init, { decode_trace, minimal_denominator, kronecker_explore } from "./pkg/sparse_interp_wasm.js";

const $ = (id) => document.getElementById(id);

function show(target, build) {
  try {
    target.replaceChildren(...build());
  } catch (err) {
    const p = document.createElement("p");
    p.className = "bad";
    p.textContent = String(err.message ?? err);
    target.replaceChildren(p);
  }
}

function el(tag, text, className) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (className) e.className = className;
  return e;
}

function table(headers, rows) {
  const t = el("table");
  const head = el("tr");
  headers.forEach((h) => head.append(el("th", h)));
  t.append(head);
  rows.forEach((r) => {
    const tr = el("tr");
    r.forEach((c) => tr.append(c instanceof Node ? wrap(c) : el("td", String(c))));
    t.append(tr);
  });
  return t;
}

function wrap(node) {
  const td = el("td");
  td.append(node);
  return td;
}

function runUni() {
  show($("uni-out"), () => {
    const t = JSON.parse(decode_trace($("uni-text").value, Number($("uni-c").value), Number($("uni-h").value)));
    return [
      el("p", `probe β = ${t.beta}, f(β) = ${t.value} (${t.value_bits} bits)`),
      table(["degree", "coefficient", "residue after peel", "bits"],
        t.steps.map((s) => [s.degree, s.coefficient, s.residue, s.residue_bits])),
      el("pre", t.recovered),
    ];
  });
}

function runMiniDenom() {
  show($("md-out"), () => {
    const r = JSON.parse(minimal_denominator($("md-lo").value, $("md-hi").value));
    return [el("p", `denominator ${r.denominator}, first fraction inside: ${r.fraction}`)];
  });
}

function runKronecker() {
  show($("kr-out"), () => {
    const r = JSON.parse(kronecker_explore($("kr-text").value, Number($("kr-d").value), Number($("kr-p").value)));
    return [
      el("p", `k = [${r.substitution.join(", ")}]`),
      table(["exponents", "image degree"],
        r.terms.map((t) => [`(${t.exponents.join(", ")})`, el("span", String(t.degree), t.collides ? "bad" : "good")])),
      el("p", r.good ? "good prime" : "bad prime: monomials collide", r.good ? "good" : "bad"),
      el("pre", r.image),
      el("p", `good among the first odd primes: ${r.good_primes.join(", ")}; bad: ${r.bad_primes.join(", ") || "none"}`),
    ];
  });
}

await init();
$("uni-run").addEventListener("click", runUni);
$("md-run").addEventListener("click", runMiniDenom);
$("kr-run").addEventListener("click", runKronecker);
runUni();
runMiniDenom();
runKronecker();
