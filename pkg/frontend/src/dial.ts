/** Weight dial: one anchor per feature set on a circle; the dial position
 * between them determines the convex combination weights by normalized
 * inverse squared distance. Dial exactly on an anchor snaps to one-hot. */

import type { Point } from './types.js'

const SNAP_EPSILON = 1e-9

/** Evenly spaced anchor positions on a circle, starting at 12 o'clock. */
export function anchorPositions(count: number, radius = 1, center: Point = { x: 0, y: 0 }): Point[] {
  const anchors: Point[] = []
  for (let i = 0; i < count; i++) {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / count
    anchors.push({
      x: center.x + radius * Math.cos(angle),
      y: center.y + radius * Math.sin(angle),
    })
  }
  return anchors
}

/** Inverse-distance-squared weights of the dial relative to the anchors.
 * Always sums to 1; exact one-hot when the dial sits on an anchor. */
export function dialToWeights(dial: Point, anchors: Point[]): number[] {
  if (anchors.length === 0) throw new Error('dialToWeights: no anchors')
  const d2 = anchors.map((a) => (a.x - dial.x) ** 2 + (a.y - dial.y) ** 2)
  const onAnchor = d2.findIndex((d) => d < SNAP_EPSILON * SNAP_EPSILON)
  if (onAnchor >= 0) {
    return anchors.map((_, i) => (i === onAnchor ? 1 : 0))
  }
  const inv = d2.map((d) => 1 / d)
  const total = inv.reduce((s, v) => s + v, 0)
  return inv.map((v) => v / total)
}

/** Opacity for an anchor's glyph and label: fades with its weight but
 * stays legible (floor 0.25). */
export function anchorAlpha(weight: number): number {
  return 0.25 + 0.75 * Math.min(1, Math.max(0, weight))
}
