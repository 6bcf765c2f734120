/** Page wiring: class tabs, dynamic form, import/export, solve, results. */

import { ServiceClient, RunResult } from "./api.js";
import { drawLevelSets } from "./contour.js";
import {
  FIELD_CHOICES,
  FIELD_KINDS,
  FormState,
  configFromForm,
  emptyForm,
  formFromConfig,
  pinErrors,
  setField,
  switchClass,
} from "./form.js";
import { submitView } from "./render.js";
import {
  SYSTEM_CLASSES,
  SystemClass,
  exportConfig,
  fieldsForClass,
  parseConfigDocument,
} from "./schema.js";

const FIELD_HELP: Record<string, string> = {
  dim: "state dimension n",
  b_degree: "barrier degree (even); the maximum degree in parallel mode",
  l_degree: "multiplier degree (even, defaults to b_degree)",
  L_space: "lower bounds of the state set X, e.g. [-7, -7]",
  U_space: "upper bounds of the state set X",
  L_initial: "lower bounds of the initial region",
  U_initial: "upper bounds of the initial region",
  L_unsafe: "one lower-bound array per unsafe region, e.g. [[6, -7]]",
  U_unsafe: "one upper-bound array per unsafe region",
  f: 'dynamics, one expression per dimension, e.g. ["x1 + 0.1*x2 + varsigma1", ...]',
  t: "time horizon (stochastic classes)",
  NoiseType: "normal | uniform | exponential",
  mean: "per-dimension means (normal)",
  sigma: "per-dimension standard deviations (normal)",
  rate: "per-dimension rates (exponential)",
  a: "per-dimension lower bounds (uniform)",
  b: "per-dimension upper bounds (uniform)",
  delta: 'diffusion: ["0", "0.5*x2"] is one column; 0 disables',
  rho: "reset term columns; 0 disables",
  p_rate: "Poisson rates, one per reset column",
  optimize: "minimize gamma + c*t for the pinned lam",
  confidence: "search for any certificate with at least this confidence",
  gam: "pin gamma",
  lam: "pin lambda (required for optimize mode)",
  c_val: "pin c",
  degrees: "explicit degree list for the search, e.g. [2, 4, 6]",
  parallel: "search all degrees concurrently",
  eps_gap: "strictness gap for lambda > gamma",
  box_encoding: "affine | quadratic",
  barrier_sos: "require B itself to be a sum of squares",
  barrier_nonneg: "certify B >= 0 on the state set",
};

const serviceBase = (window as { BARRIERCERT_SERVICE?: string }).BARRIERCERT_SERVICE
  ?? `${window.location.protocol}//${window.location.host}`;
const client = new ServiceClient(serviceBase);

let state: FormState = emptyForm("dt-SS");
let lastResult: RunResult | null = null;

const tabs = document.getElementById("tabs") as HTMLDivElement;
const formRoot = document.getElementById("form") as HTMLDivElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const resultRoot = document.getElementById("result") as HTMLDivElement;
const solveButton = document.getElementById("solve") as HTMLButtonElement;
const exampleSelect = document.getElementById("examples") as HTMLSelectElement;

function showBanner(message: string, level: "error" | "warning" | "") {
  banner.textContent = message;
  banner.className = level ? `banner ${level}` : "banner hidden";
}

function renderTabs() {
  tabs.innerHTML = "";
  for (const mode of SYSTEM_CLASSES) {
    const button = document.createElement("button");
    button.textContent = mode;
    button.className = mode === state.mode ? "tab active" : "tab";
    button.addEventListener("click", () => {
      state = switchClass(state, mode);
      renderAll();
    });
    tabs.appendChild(button);
  }
}

function renderForm() {
  formRoot.innerHTML = "";
  for (const field of fieldsForClass(state.mode)) {
    const kind = FIELD_KINDS[field];
    const row = document.createElement("label");
    row.className = "field";
    const caption = document.createElement("span");
    caption.textContent = field;
    row.appendChild(caption);

    let input: HTMLInputElement | HTMLSelectElement;
    if (kind === "bool") {
      const select = document.createElement("select");
      for (const option of ["", "true", "false"]) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option || "(default)";
        select.appendChild(el);
      }
      select.value = state.values[field] ?? "";
      input = select;
    } else if (kind === "choice") {
      const select = document.createElement("select");
      for (const option of ["", ...(FIELD_CHOICES[field] ?? [])]) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option || "(unset)";
        select.appendChild(el);
      }
      select.value = state.values[field] ?? "";
      input = select;
    } else {
      const text = document.createElement("input");
      text.type = "text";
      text.value = state.values[field] ?? "";
      text.placeholder = FIELD_HELP[field] ?? "";
      input = text;
    }
    input.dataset.field = field;
    input.addEventListener("input", () => {
      state = setField(state, field, input.value);
      refreshValidity();
    });
    row.appendChild(input);

    const error = document.createElement("span");
    error.className = "field-error";
    error.dataset.errorFor = field;
    if (state.errors[field]) {
      error.textContent = state.errors[field];
      row.classList.add("invalid");
    }
    row.appendChild(error);
    const help = document.createElement("span");
    help.className = "help";
    help.textContent = FIELD_HELP[field] ?? "";
    row.appendChild(help);
    formRoot.appendChild(row);
  }
  refreshValidity();
}

function refreshValidity() {
  const outcome = configFromForm(state);
  solveButton.disabled = outcome.config === undefined;
  const pinned = pinErrors(outcome.errors);
  for (const element of formRoot.querySelectorAll<HTMLElement>(".field-error")) {
    const field = element.dataset.errorFor as string;
    element.textContent = pinned[field] ?? "";
    element.parentElement?.classList.toggle("invalid", field in pinned);
  }
}

function renderResult(result: RunResult | null) {
  lastResult = result;
  resultRoot.innerHTML = "";
  if (!result) return;
  const view = submitView({ kind: "result", result });
  if (view.kind !== "result") return;

  const head = document.createElement("div");
  head.className = `status ${view.feasible ? "feasible" : "infeasible"}`;
  head.textContent = `status: ${view.status}`
    + (view.degree !== null ? ` (degree ${view.degree})` : "");
  resultRoot.appendChild(head);

  const table = document.createElement("dl");
  const rows: [string, unknown][] = [
    ["B(x)", view.barrierText],
    ["gamma", view.gamma],
    ["lambda", view.lambda],
    ["c", view.c],
    ["confidence", view.confidence],
    ["policy", view.policy],
    ["wall time (s)", view.totalWall],
    ["validated", view.validationOk],
  ];
  for (const [label, value] of rows) {
    if (value === null || value === undefined) continue;
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = String(value);
    table.appendChild(dt);
    table.appendChild(dd);
  }
  resultRoot.appendChild(table);

  if (view.perDegree.length > 1) {
    const list = document.createElement("ul");
    list.className = "degrees";
    for (const record of view.perDegree) {
      const item = document.createElement("li");
      item.textContent = `degree ${record.degree}: ${record.status}`
        + (record.confidence !== null ? `, phi=${record.confidence}` : "")
        + ` (${record.wall.toFixed(2)}s)`;
      list.appendChild(item);
    }
    resultRoot.appendChild(list);
  }

  if (view.suggestion) {
    const note = document.createElement("p");
    note.className = "suggestion";
    note.textContent = view.suggestion;
    resultRoot.appendChild(note);
  }

  if (result.plot) {
    const canvas = document.createElement("canvas");
    canvas.width = 420;
    canvas.height = 420;
    resultRoot.appendChild(canvas);
    drawLevelSets(canvas, result.plot);
    const legend = document.createElement("p");
    legend.className = "legend";
    legend.textContent = "solid blue: B = gamma; dashed red: B = lambda";
    resultRoot.appendChild(legend);
  }
}

async function submit() {
  const outcome = configFromForm(state);
  if (!outcome.config) {
    state = { ...state, errors: pinErrors(outcome.errors) };
    renderForm();
    return;
  }
  showBanner("solving...", "warning");
  solveButton.disabled = true;
  const response = await client.solve(outcome.config);
  solveButton.disabled = false;
  const view = submitView(response);
  if (view.kind === "result") {
    showBanner("", "");
    state = { ...state, errors: {} };
    renderForm();
    renderResult(response.kind === "result" ? response.result : null);
  } else if (view.kind === "field-errors") {
    state = { ...state, errors: view.errors };
    renderForm();
    showBanner("the service rejected the configuration", "error");
  } else {
    showBanner(view.message, view.level);
  }
}

function importDocument(text: string) {
  const parsed = parseConfigDocument(text);
  if (parsed.config) {
    state = formFromConfig(parsed.config);
    showBanner("", "");
  } else {
    state = { ...state, errors: pinErrors(parsed.errors) };
    showBanner("import failed: " + parsed.errors.map((e) => `${e.field}: ${e.message}`).join("; "),
               "error");
  }
  renderAll();
}

function exportDocument() {
  const outcome = configFromForm(state);
  if (!outcome.config) {
    state = { ...state, errors: pinErrors(outcome.errors) };
    renderForm();
    return;
  }
  const blob = new Blob([exportConfig(outcome.config)], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `${outcome.config.name ?? "config"}.json`;
  link.click();
  URL.revokeObjectURL(link.href);
}

async function loadExamples() {
  try {
    const examples = await client.listExamples();
    for (const example of examples) {
      const option = document.createElement("option");
      option.value = example.name;
      option.textContent = `${example.name} (${example.mode})`;
      exampleSelect.appendChild(option);
    }
  } catch {
    showBanner("service not reachable; import a config file instead", "warning");
  }
}

function renderAll() {
  renderTabs();
  renderForm();
}

document.getElementById("import")!.addEventListener("change", (event) => {
  const file = (event.target as HTMLInputElement).files?.[0];
  if (!file) return;
  file.text().then(importDocument);
});
document.getElementById("export")!.addEventListener("click", exportDocument);
solveButton.addEventListener("click", () => { void submit(); });
exampleSelect.addEventListener("change", async () => {
  if (!exampleSelect.value) return;
  const text = await client.exampleText(exampleSelect.value);
  importDocument(text);
});

renderAll();
void loadExamples();

export { importDocument, state };
