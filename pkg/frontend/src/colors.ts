// Categorical palette keyed stably by algorithm name: the same algorithm
// gets the same color in every session and every view.

const PALETTE = [
  "#4878cf", "#6acc65", "#d65f5f", "#b47cc7", "#c4ad66",
  "#77bedb", "#e08745", "#8c8c8c", "#e377c2", "#17becf",
];

function hashString(name: string): number {
  let h = 2166136261;
  for (let i = 0; i < name.length; i++) {
    h ^= name.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

export function colorFor(algorithm: string): string {
  return PALETTE[hashString(algorithm) % PALETTE.length];
}
