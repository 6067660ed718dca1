/**
 * Small geometric helpers shared by the figure renderers: the modular
 * fundamental domain, hyperbolic area, and an equal-area sphere projection.
 */

export interface ModularPoint {
  x: number;
  y: number;
}

/**
 * Map a reduced 2x2 Gram matrix [[a,b],[b,c]] to its point x + iy in the
 * upper half plane: x = b/a, y = sqrt(ac - b^2)/a.  For canonical
 * (Minkowski-reduced) matrices with 0 <= 2b <= a <= c the image lies in
 * the closed right half of the standard fundamental domain.
 */
export function modularPoint(g11: number, g12: number, g21: number, g22: number): ModularPoint {
  const det = g11 * g22 - g12 * g21;
  if (g11 <= 0 || det <= 0) {
    throw new Error(`not positive definite: [[${g11},${g12}],[${g21},${g22}]]`);
  }
  return { x: g12 / g11, y: Math.sqrt(det) / g11 };
}

export function inFundamentalDomain(p: ModularPoint, eps = 1e-9): boolean {
  return (
    p.y > 0 &&
    Math.abs(p.x) <= 0.5 + eps &&
    p.x * p.x + p.y * p.y >= 1 - eps
  );
}

/** Hyperbolic measure (3/pi) dx dy / y^2 of an axis-aligned box with y0 >= 1. */
export function hyperbolicBoxMeasure(x0: number, x1: number, y0: number, y1: number): number {
  return ((3 / Math.PI) * (x1 - x0) * (1 / y0 - 1 / y1));
}

export interface ProjectedPoint {
  u: number;
  v: number;
  upper: boolean;
}

/**
 * Lambert azimuthal equal-area projection of a unit vector, from the pole
 * nearest the point.  Each hemisphere maps onto a disk of radius sqrt(2);
 * `upper` records which hemisphere (last coordinate >= 0) the point is in.
 */
export function equalAreaProject(x: number, y: number, z: number): ProjectedPoint {
  const upper = z >= 0;
  const s = Math.sqrt(2 / (1 + Math.abs(z)));
  return { u: s * x, v: s * y, upper };
}
