/** Per-class field gating and client-side validation behavior. */

import { describe, expect, it } from "vitest";

import { configFromForm, emptyForm, pinErrors, setField, switchClass } from "../src/form.js";
import { fieldsForClass, validateConfig } from "../src/schema.js";

describe("class tabs gate the visible fields", () => {
  it("hides stochastic-only fields on deterministic tabs", () => {
    for (const mode of ["dt-DS", "ct-DS"] as const) {
      const visible = fieldsForClass(mode);
      for (const field of ["t", "NoiseType", "mean", "sigma", "rate", "a", "b",
                           "delta", "rho", "p_rate", "confidence", "c_val", "optimize"]) {
        expect(visible, `${field} on ${mode}`).not.toContain(field);
      }
    }
  });

  it("shows additive-noise fields only on dt-SS and diffusion fields only on ct-SS", () => {
    expect(fieldsForClass("dt-SS")).toContain("NoiseType");
    expect(fieldsForClass("dt-SS")).not.toContain("delta");
    expect(fieldsForClass("ct-SS")).toContain("delta");
    expect(fieldsForClass("ct-SS")).not.toContain("NoiseType");
  });

  it("exposes the parallel toggle and degree list on every tab", () => {
    for (const mode of ["dt-SS", "dt-DS", "ct-SS", "ct-DS"] as const) {
      expect(fieldsForClass(mode)).toContain("parallel");
      expect(fieldsForClass(mode)).toContain("degrees");
      expect(fieldsForClass(mode)).toContain("b_degree");
    }
  });
});

describe("form validation", () => {
  function minimalDeterministic() {
    let form = emptyForm("dt-DS");
    form = setField(form, "dim", "1");
    form = setField(form, "b_degree", "2");
    form = setField(form, "L_space", "[-1]");
    form = setField(form, "U_space", "[1]");
    form = setField(form, "L_initial", "[0]");
    form = setField(form, "U_initial", "[0.1]");
    form = setField(form, "L_unsafe", "[[-1]]");
    form = setField(form, "U_unsafe", "[[-0.9]]");
    form = setField(form, "f", '["0.5*x1"]');
    return form;
  }

  it("accepts a minimal deterministic form", () => {
    const outcome = configFromForm(minimalDeterministic());
    expect(outcome.errors).toEqual([]);
    expect(outcome.config!.mode).toBe("dt-DS");
  });

  it("keeps submit disabled until the schema passes", () => {
    let form = emptyForm("dt-SS");
    expect(configFromForm(form).config).toBeUndefined();
    form = minimalDeterministic();
    expect(configFromForm(form).config).toBeDefined();
  });

  it("flags the horizon on stochastic tabs", () => {
    let form = minimalDeterministic();
    form = switchClass(form, "dt-SS");
    form = setField(form, "NoiseType", "normal");
    form = setField(form, "mean", "[0]");
    form = setField(form, "sigma", "[0.01]");
    const outcome = configFromForm(form);
    expect(outcome.config).toBeUndefined();
    expect(pinErrors(outcome.errors).t).toContain("t required");
  });

  it("tracks dirty fields and marks JSON mistakes on the field", () => {
    let form = minimalDeterministic();
    form = setField(form, "L_space", "[-1");  // broken JSON
    expect(form.dirty.has("L_space")).toBe(true);
    const outcome = configFromForm(form);
    expect(outcome.config).toBeUndefined();
    expect(pinErrors(outcome.errors).L_space).toBeDefined();
  });

  it("validates cross-field noise parameters", () => {
    const raw = {
      mode: "dt-SS", dim: 1, b_degree: 4, t: 5,
      L_space: [0], U_space: [1], L_initial: [0], U_initial: [0.1],
      L_unsafe: [[0.9]], U_unsafe: [[1]], f: ["x1 + varsigma1"],
      NoiseType: "normal", mean: [0], sigma: [0.01], rate: [1],
    };
    const errors = validateConfig(raw);
    expect(errors.some((e) => e.field === "rate")).toBe(true);
  });

  it("rejects optimize without a pinned lambda", () => {
    const raw = {
      mode: "dt-SS", dim: 1, b_degree: 4, t: 5, optimize: true,
      L_space: [0], U_space: [1], L_initial: [0], U_initial: [0.1],
      L_unsafe: [[0.9]], U_unsafe: [[1]], f: ["x1 + varsigma1"],
      NoiseType: "exponential", rate: [1],
    };
    const errors = validateConfig(raw);
    expect(errors.some((e) => e.field === "lam")).toBe(true);
  });
});
