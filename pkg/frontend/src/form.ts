/**
 * Form state: textual field values per class tab, dirty tracking, and the
 * config <-> form conversions. The submit button stays disabled until the
 * client-side schema validation passes.
 */

import {
  CONFIG_FIELD_ORDER,
  FieldError,
  RunConfig,
  SystemClass,
  fieldsForClass,
  validateConfig,
} from "./schema.js";

export type FieldKind =
  | "string" | "int" | "number" | "bool"
  | "numArray" | "numMatrix" | "exprArray" | "flexMatrix" | "numOrArray"
  | "choice";

export const FIELD_KINDS: Record<string, FieldKind> = {
  name: "string",
  description: "string",
  mode: "choice",
  dim: "int",
  b_degree: "int",
  l_degree: "int",
  L_space: "numArray",
  U_space: "numArray",
  L_initial: "numArray",
  U_initial: "numArray",
  L_unsafe: "numMatrix",
  U_unsafe: "numMatrix",
  f: "exprArray",
  t: "int",
  NoiseType: "choice",
  mean: "numArray",
  sigma: "numArray",
  rate: "numArray",
  a: "numArray",
  b: "numArray",
  delta: "flexMatrix",
  rho: "flexMatrix",
  p_rate: "numOrArray",
  optimize: "bool",
  confidence: "number",
  gam: "number",
  lam: "number",
  c_val: "number",
  solver: "choice",
  parallel: "bool",
  degrees: "numArray",
  eps_gap: "number",
  box_encoding: "choice",
  barrier_sos: "bool",
  barrier_nonneg: "bool",
};

export const FIELD_CHOICES: Record<string, string[]> = {
  NoiseType: ["normal", "uniform", "exponential"],
  solver: ["clarabel"],
  box_encoding: ["affine", "quadratic"],
};

export interface FormState {
  mode: SystemClass;
  values: Record<string, string>;
  dirty: Set<string>;
  errors: Record<string, string>;
}

function renderValue(kind: FieldKind, value: unknown): string {
  if (value === undefined || value === null) return "";
  switch (kind) {
    case "string":
    case "choice":
      return String(value);
    case "bool":
      return value ? "true" : "false";
    case "int":
    case "number":
      return JSON.stringify(value);
    default:
      return JSON.stringify(value);
  }
}

function parseValue(kind: FieldKind, text: string): unknown {
  const trimmed = text.trim();
  if (!trimmed) return undefined;
  switch (kind) {
    case "string":
    case "choice":
      return trimmed;
    case "bool":
      if (trimmed === "true") return true;
      if (trimmed === "false") return false;
      throw new Error("expected true or false");
    case "int": {
      const parsed = JSON.parse(trimmed);
      if (typeof parsed !== "number" || !Number.isInteger(parsed)) {
        throw new Error("expected an integer");
      }
      return parsed;
    }
    case "number": {
      const parsed = JSON.parse(trimmed);
      if (typeof parsed !== "number") throw new Error("expected a number");
      return parsed;
    }
    default: {
      // arrays / matrices / expression lists are edited as JSON
      return JSON.parse(trimmed);
    }
  }
}

export function emptyForm(mode: SystemClass): FormState {
  return { mode, values: {}, dirty: new Set(), errors: {} };
}

/** Populate every field exactly from an imported config. */
export function formFromConfig(config: RunConfig): FormState {
  const raw = config as unknown as Record<string, unknown>;
  const values: Record<string, string> = {};
  for (const field of CONFIG_FIELD_ORDER) {
    if (field === "mode") continue;
    const kind = FIELD_KINDS[field];
    const value = raw[field];
    if (value !== undefined && value !== null) {
      values[field] = renderValue(kind, value);
    }
  }
  return { mode: config.mode, values, dirty: new Set(), errors: {} };
}

export interface FormToConfig {
  config?: RunConfig;
  errors: FieldError[];
}

/** Parse the visible fields back into a config and schema-validate it. */
export function configFromForm(state: FormState): FormToConfig {
  const visible = new Set(fieldsForClass(state.mode));
  const raw: Record<string, unknown> = { mode: state.mode };
  const errors: FieldError[] = [];
  for (const [field, text] of Object.entries(state.values)) {
    if (!visible.has(field)) continue;
    const kind = FIELD_KINDS[field];
    if (!kind) continue;
    try {
      const value = parseValue(kind, text);
      if (value !== undefined) raw[field] = value;
    } catch (error) {
      errors.push({ field, message: (error as Error).message });
    }
  }
  if (errors.length) return { errors };
  const schemaErrors = validateConfig(raw);
  if (schemaErrors.length) return { errors: schemaErrors };
  return { config: raw as unknown as RunConfig, errors: [] };
}

export function setField(state: FormState, field: string, text: string): FormState {
  const values = { ...state.values };
  if (text.trim() === "") {
    delete values[field];
  } else {
    values[field] = text;
  }
  const dirty = new Set(state.dirty);
  dirty.add(field);
  return { ...state, values, dirty };
}

export function switchClass(state: FormState, mode: SystemClass): FormState {
  return { ...state, mode };
}

/** Map service 422 details / validation errors onto their fields. */
export function pinErrors(errors: FieldError[]): Record<string, string> {
  const pinned: Record<string, string> = {};
  for (const { field, message } of errors) {
    const key = field.replace(/\[\d+\]$/, "");
    if (!(key in pinned)) pinned[key] = message;
  }
  return pinned;
}
