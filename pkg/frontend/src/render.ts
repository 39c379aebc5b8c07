/** Canvas grid rendering: one rectangle per cell, black for empty cells,
 * and an optional per-cell metric coloring with a min/max-normalized ramp.
 * The drawing surface is a minimal structural interface so tests can pass
 * a recording stub instead of a real 2D context. */

import type { GridPayload } from './types.js'

export interface Surface {
  fillStyle: string | CanvasGradient | CanvasPattern
  fillRect(x: number, y: number, w: number, h: number): void
  strokeStyle: string | CanvasGradient | CanvasPattern
  strokeRect(x: number, y: number, w: number, h: number): void
}

export const EMPTY_CELL_COLOR = '#000000'
export const OCCUPIED_CELL_COLOR = '#4477aa'

/** Per-cell metric values, row-major; null marks an empty cell. */
export type MetricGrid = (number | null)[][]

export interface ColorScale {
  min: number
  max: number
  color(value: number): string
}

/** Blue-to-yellow ramp over the finite values of a metric grid. */
export function metricColorScale(metric: MetricGrid): ColorScale {
  let min = Infinity
  let max = -Infinity
  for (const row of metric) {
    for (const v of row) {
      if (v === null) continue
      if (v < min) min = v
      if (v > max) max = v
    }
  }
  if (min > max) {
    min = 0
    max = 1
  }
  const span = max - min || 1
  return {
    min,
    max,
    color(value: number): string {
      const t = Math.min(1, Math.max(0, (value - min) / span))
      const r = Math.round(40 + 215 * t)
      const g = Math.round(60 + 180 * t)
      const b = Math.round(180 - 140 * t)
      return `rgb(${r},${g},${b})`
    },
  }
}

export interface RenderOptions {
  cellSize: number
  metric?: MetricGrid
  gridLines?: boolean
}

/** Paints every cell of the payload's grid: empty cells black, occupied
 * cells either a flat color or the metric ramp. Returns the number of
 * rectangles painted (= rows * cols). */
export function renderGrid(ctx: Surface, grid: GridPayload, opts: RenderOptions): number {
  const size = opts.cellSize
  const occupied = new Map<string, string>()
  for (const cell of grid.cells) {
    occupied.set(`${cell.row},${cell.col}`, cell.id)
  }
  const scale = opts.metric ? metricColorScale(opts.metric) : null
  let painted = 0
  for (let i = 0; i < grid.rows; i++) {
    for (let j = 0; j < grid.cols; j++) {
      const metricValue = opts.metric ? opts.metric[i]?.[j] ?? null : undefined
      if (!occupied.has(`${i},${j}`)) {
        ctx.fillStyle = EMPTY_CELL_COLOR
      } else if (scale && metricValue !== null && metricValue !== undefined) {
        ctx.fillStyle = scale.color(metricValue)
      } else {
        ctx.fillStyle = OCCUPIED_CELL_COLOR
      }
      ctx.fillRect(j * size, i * size, size, size)
      painted++
      if (opts.gridLines) {
        ctx.strokeStyle = 'rgba(255,255,255,0.15)'
        ctx.strokeRect(j * size + 0.5, i * size + 0.5, size - 1, size - 1)
      }
    }
  }
  return painted
}
