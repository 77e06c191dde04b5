// In-situ space edits: delta builders, client-side wire validation, and the
// "would this disable everything?" guard that blocks a doomed request.

import type { NumericSpec, SpaceDeltaJson, SpaceInfo } from "./api.js";

const DELTA_KINDS = new Set([
  "enable_algorithm",
  "disable_algorithm",
  "enable_hyperpartition",
  "disable_hyperpartition",
  "set_range",
  "reset_range",
]);

export function algorithmFlagDelta(name: string, enabled: boolean): SpaceDeltaJson {
  return { kind: enabled ? "enable_algorithm" : "disable_algorithm", algorithm: name };
}

export function hyperpartitionFlagDelta(id: string, enabled: boolean): SpaceDeltaJson {
  return {
    kind: enabled ? "enable_hyperpartition" : "disable_hyperpartition",
    hyperpartition: id,
  };
}

export function setRangeDelta(
  scope: { algorithm?: string; hyperpartition?: string },
  hyperparameter: string,
  lo: number,
  hi: number,
): SpaceDeltaJson {
  return { kind: "set_range", ...scope, hyperparameter, range: [lo, hi] };
}

export function resetRangeDelta(
  scope: { algorithm?: string; hyperpartition?: string },
  hyperparameter: string,
): SpaceDeltaJson {
  return { kind: "reset_range", ...scope, hyperparameter };
}

/** Validate a delta against the wire schema before sending. Returns an
 * error message, or null when the payload is well-formed. */
export function validateDelta(delta: SpaceDeltaJson): string | null {
  if (!DELTA_KINDS.has(delta.kind)) {
    return `unknown delta kind ${delta.kind}`;
  }
  if (!delta.algorithm && !delta.hyperpartition) {
    return "delta needs an algorithm or hyperpartition target";
  }
  if (delta.kind === "set_range" || delta.kind === "reset_range") {
    if (!delta.hyperparameter) return `${delta.kind} needs a hyperparameter`;
  }
  if (delta.kind === "set_range") {
    const range = delta.range;
    if (!range || range.length !== 2 || !range.every(Number.isFinite)) {
      return "set_range needs a finite [lo, hi] range";
    }
    if (!(range[0] < range[1])) return "range must satisfy lo < hi";
  } else if (delta.range) {
    return `${delta.kind} carries no range`;
  }
  return null;
}

/** Simulate enable/disable flags to catch an edit that would leave no
 * hyperpartition effectively enabled (the server would reject it anyway;
 * the client warns instead of sending). */
export function wouldDisableEverything(
  space: SpaceInfo,
  delta: SpaceDeltaJson,
): boolean {
  if (delta.kind !== "disable_algorithm" && delta.kind !== "disable_hyperpartition") {
    return false;
  }
  const algoEnabled = { ...space.algorithm_enabled };
  const hpEnabled = { ...space.hyperpartition_enabled };
  if (delta.kind === "disable_algorithm" && delta.algorithm) {
    algoEnabled[delta.algorithm] = false;
  }
  if (delta.kind === "disable_hyperpartition" && delta.hyperpartition) {
    hpEnabled[delta.hyperpartition] = false;
  }
  return !space.hyperpartitions.some(
    (hp) => algoEnabled[hp.algorithm] && hpEnabled[hp.id],
  );
}

/** Snap a brushed value to the spec: integers round, reals keep six
 * significant digits so pixel jitter never leaks into the wire form. */
export function snapValue(spec: Pick<NumericSpec, "kind">, value: number): number {
  if (spec.kind === "integer") return Math.round(value);
  return Number(value.toPrecision(6));
}

export function activeRangeFor(
  space: SpaceInfo,
  hyperpartitionId: string,
  hyperparameter: string,
): [number, number] | null {
  const entry = space.active_ranges.find(
    (r) => r.hyperpartition === hyperpartitionId && r.hyperparameter === hyperparameter,
  );
  return entry ? entry.range : null;
}
