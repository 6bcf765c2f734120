/**
 * Config document schema: types, per-class field visibility, client-side
 * validation, and the canonical export form (byte-identical to the
 * service's own canonical writer).
 */

export type SystemClass = "dt-SS" | "dt-DS" | "ct-SS" | "ct-DS";

export const SYSTEM_CLASSES: SystemClass[] = ["dt-SS", "dt-DS", "ct-SS", "ct-DS"];

export interface RunConfig {
  name?: string;
  description?: string;
  mode: SystemClass;
  dim: number;
  b_degree: number;
  l_degree?: number;
  L_space: number[];
  U_space: number[];
  L_initial: number[];
  U_initial: number[];
  L_unsafe: number[][];
  U_unsafe: number[][];
  f: (string | number)[];
  t?: number;
  NoiseType?: "normal" | "uniform" | "exponential";
  mean?: number[];
  sigma?: number[];
  rate?: number[];
  a?: number[];
  b?: number[];
  delta?: (string | number)[] | (string | number)[][] | number;
  rho?: (string | number)[] | (string | number)[][] | number;
  p_rate?: number[] | number;
  optimize?: boolean;
  confidence?: number;
  gam?: number;
  lam?: number;
  c_val?: number;
  solver?: "clarabel";
  parallel?: boolean;
  degrees?: number[];
  eps_gap?: number;
  box_encoding?: "affine" | "quadratic";
  barrier_sos?: boolean;
  barrier_nonneg?: boolean;
}

export const CONFIG_FIELD_ORDER = [
  "name", "description", "mode", "dim", "b_degree", "l_degree",
  "L_space", "U_space", "L_initial", "U_initial", "L_unsafe", "U_unsafe",
  "f", "t",
  "NoiseType", "mean", "sigma", "rate", "a", "b",
  "delta", "rho", "p_rate",
  "optimize", "confidence", "gam", "lam", "c_val",
  "solver", "parallel", "degrees", "eps_gap", "box_encoding", "barrier_sos",
  "barrier_nonneg",
] as const;

/** Schema defaults; fields equal to their default are omitted on export. */
export const CONFIG_DEFAULTS: Record<string, unknown> = {
  optimize: false,
  solver: "clarabel",
  parallel: false,
  eps_gap: 1e-6,
  box_encoding: "affine",
  barrier_sos: false,
  barrier_nonneg: false,
};

const STOCHASTIC: SystemClass[] = ["dt-SS", "ct-SS"];

export function isStochastic(mode: SystemClass): boolean {
  return STOCHASTIC.includes(mode);
}

/** Which config fields render on each class tab. */
export function fieldsForClass(mode: SystemClass): string[] {
  const common = [
    "name", "description", "dim", "b_degree", "l_degree",
    "L_space", "U_space", "L_initial", "U_initial", "L_unsafe", "U_unsafe",
    "f", "gam", "lam", "solver", "parallel", "degrees", "eps_gap",
    "box_encoding", "barrier_sos", "barrier_nonneg",
  ];
  if (mode === "dt-SS") {
    return [...common, "t", "NoiseType", "mean", "sigma", "rate", "a", "b",
            "optimize", "confidence", "c_val"];
  }
  if (mode === "ct-SS") {
    return [...common, "t", "delta", "rho", "p_rate",
            "optimize", "confidence", "c_val"];
  }
  return common;
}

export interface FieldError {
  field: string;
  message: string;
}

function err(field: string, message: string): FieldError {
  return { field, message };
}

function isNumberArray(value: unknown, length?: number): value is number[] {
  return Array.isArray(value)
    && value.every((v) => typeof v === "number" && Number.isFinite(v))
    && (length === undefined || value.length === length);
}

/**
 * Client-side schema validation mirroring the service's checks; returns
 * field-level errors. Unknown keys are rejected.
 */
export function validateConfig(raw: Record<string, unknown>): FieldError[] {
  const errors: FieldError[] = [];
  const known = new Set<string>(CONFIG_FIELD_ORDER as readonly string[]);
  for (const key of Object.keys(raw)) {
    if (!known.has(key)) errors.push(err(key, "unknown key"));
  }

  const mode = raw.mode as SystemClass;
  if (!SYSTEM_CLASSES.includes(mode)) {
    errors.push(err("mode", "must be one of dt-SS, dt-DS, ct-SS, ct-DS"));
    return errors;
  }
  const dim = raw.dim;
  if (typeof dim !== "number" || !Number.isInteger(dim) || dim < 1) {
    errors.push(err("dim", "must be an integer >= 1"));
    return errors;
  }
  const bdeg = raw.b_degree;
  if (typeof bdeg !== "number" || !Number.isInteger(bdeg) || bdeg < 2 || bdeg % 2 !== 0) {
    errors.push(err("b_degree", "must be an even integer >= 2"));
  }
  if (raw.l_degree !== undefined && raw.l_degree !== null) {
    const l = raw.l_degree;
    if (typeof l !== "number" || !Number.isInteger(l) || l < 2 || l % 2 !== 0) {
      errors.push(err("l_degree", "must be an even integer >= 2"));
    }
  }

  for (const field of ["L_space", "U_space", "L_initial", "U_initial"]) {
    if (!isNumberArray(raw[field], dim)) {
      errors.push(err(field, `expected ${dim} numbers`));
    }
  }
  const lUnsafe = raw.L_unsafe;
  const uUnsafe = raw.U_unsafe;
  if (!Array.isArray(lUnsafe) || !Array.isArray(uUnsafe)
      || lUnsafe.length === 0 || lUnsafe.length !== uUnsafe.length) {
    errors.push(err("L_unsafe", "one lower/upper array pair per unsafe region"));
  } else {
    lUnsafe.forEach((row, j) => {
      if (!isNumberArray(row, dim)) errors.push(err(`L_unsafe[${j}]`, `expected ${dim} numbers`));
    });
    uUnsafe.forEach((row, j) => {
      if (!isNumberArray(row, dim)) errors.push(err(`U_unsafe[${j}]`, `expected ${dim} numbers`));
    });
  }

  const f = raw.f;
  if (!Array.isArray(f) || f.length !== dim
      || !f.every((e) => typeof e === "string" || typeof e === "number")) {
    errors.push(err("f", `expected ${dim} expressions`));
  }

  const stochastic = isStochastic(mode);
  if (stochastic) {
    if (raw.t === undefined || raw.t === null) {
      errors.push(err("t", "t required for stochastic classes"));
    } else if (typeof raw.t !== "number" || !Number.isInteger(raw.t) || raw.t < 1) {
      errors.push(err("t", "must be a positive integer"));
    }
    if (raw.optimize === true && (raw.lam === undefined || raw.lam === null)) {
      errors.push(err("lam", "optimize mode requires a pinned lam"));
    }
    if (raw.optimize === true && raw.confidence !== undefined && raw.confidence !== null) {
      errors.push(err("optimize", "choose either optimize or a confidence target, not both"));
    }
    const conf = raw.confidence;
    if (conf !== undefined && conf !== null
        && (typeof conf !== "number" || conf <= 0 || conf >= 1)) {
      errors.push(err("confidence", "must lie strictly between 0 and 1"));
    }
  } else {
    const inapplicable = ["t", "NoiseType", "mean", "sigma", "rate", "a", "b",
                          "delta", "rho", "p_rate", "confidence", "c_val"];
    for (const field of inapplicable) {
      const v = raw[field];
      if (v !== undefined && v !== null && v !== false) {
        errors.push(err(field, `not applicable: ${mode} is deterministic`));
      }
    }
    if (raw.optimize === true) {
      errors.push(err("optimize", `not applicable: ${mode} is deterministic`));
    }
  }

  if (mode === "dt-SS") {
    const noise = raw.NoiseType;
    const params: Record<string, string[]> = {
      normal: ["mean", "sigma"], uniform: ["a", "b"], exponential: ["rate"],
    };
    if (typeof noise !== "string" || !(noise in params)) {
      errors.push(err("NoiseType", "required for dt-SS (normal, uniform or exponential)"));
    } else {
      for (const field of ["mean", "sigma", "rate", "a", "b"]) {
        const needed = params[noise].includes(field);
        const present = raw[field] !== undefined && raw[field] !== null;
        if (needed && !present) errors.push(err(field, `required for ${noise} noise`));
        if (!needed && present) errors.push(err(field, `not a parameter of ${noise} noise`));
      }
      const lengths = params[noise]
        .map((field) => (Array.isArray(raw[field]) ? (raw[field] as unknown[]).length : -1));
      if (lengths.some((l) => l <= 0) || new Set(lengths).size > 1) {
        errors.push(err(params[noise][0], "noise parameter arrays must share one length"));
      }
    }
    for (const field of ["delta", "rho", "p_rate"]) {
      const v = raw[field];
      if (v !== undefined && v !== null && v !== 0) {
        errors.push(err(field, "not applicable: dt-SS uses additive noise"));
      }
    }
  }

  if (raw.degrees !== undefined && raw.degrees !== null) {
    const degrees = raw.degrees;
    if (!isNumberArray(degrees) || degrees.some((d) => !Number.isInteger(d) || d < 2 || d % 2 !== 0)) {
      errors.push(err("degrees", "must be even integers >= 2"));
    } else {
      const sorted = [...new Set(degrees)].sort((x, y) => x - y);
      if (JSON.stringify(sorted) !== JSON.stringify(degrees)) {
        errors.push(err("degrees", "must be strictly ascending"));
      }
    }
  }

  for (const field of ["gam", "lam", "c_val"]) {
    const v = raw[field];
    if (v !== undefined && v !== null && (typeof v !== "number" || v < 0)) {
      errors.push(err(field, "must be a number >= 0"));
    }
  }
  return errors;
}

/** Canonical document: fixed key order, schema defaults omitted. */
export function canonicalConfig(config: RunConfig): Record<string, unknown> {
  const raw = config as unknown as Record<string, unknown>;
  const out: Record<string, unknown> = {};
  for (const key of CONFIG_FIELD_ORDER) {
    const value = raw[key];
    if (value === undefined || value === null) continue;
    if (key in CONFIG_DEFAULTS
        && JSON.stringify(value) === JSON.stringify(CONFIG_DEFAULTS[key])) continue;
    out[key] = value;
  }
  return out;
}

export function exportConfig(config: RunConfig): string {
  return JSON.stringify(canonicalConfig(config), null, 2) + "\n";
}

export interface ParseOutcome {
  config?: RunConfig;
  errors: FieldError[];
}

export function parseConfigDocument(text: string): ParseOutcome {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (error) {
    return { errors: [err("<document>", `not valid JSON: ${String(error)}`)] };
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    return { errors: [err("<document>", "expected a JSON object")] };
  }
  const errors = validateConfig(raw as Record<string, unknown>);
  if (errors.length) return { errors };
  return { config: raw as RunConfig, errors: [] };
}
