/**
 * Per-eigenvalue penalties of the covariance matching criteria: each
 * criterion applied to a model/sample pair is the sum of one of these
 * scalar functions over the whitened-covariance eigenvalues. All four are
 * nonnegative and vanish exactly at 1.
 */

export const PENALTY_KINDS = ["amv", "spice", "airm", "jbld"] as const;
export type PenaltyKind = (typeof PENALTY_KINDS)[number];

export function penalty(kind: PenaltyKind, lambda: number): number {
  if (lambda <= 0) {
    throw new RangeError(`eigenvalue penalty needs a positive value, got ${lambda}`);
  }
  switch (kind) {
    case "amv":
      return (lambda - 1) ** 2;
    case "spice": {
      const root = Math.sqrt(lambda);
      return (root - 1 / root) ** 2;
    }
    case "airm":
      return Math.log(lambda) ** 2;
    case "jbld":
      return Math.log((1 + lambda) / (2 * Math.sqrt(lambda)));
  }
}
