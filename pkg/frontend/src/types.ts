/** JSON payload shapes of the layout service (schema version v=1). */

export interface GridCell {
  id: string
  row: number
  col: number
}

export interface GridPayload {
  rows: number
  cols: number
  n: number
  empty: number
  cells: GridCell[]
}

export interface WeightsResponse {
  v: number
  revision: number
  grid: GridPayload
}

export interface SessionResponse {
  v: number
  session_id: string
  feature_sets: string[]
  sample_size: number
  revision: number
}

export interface CoarseCell {
  I: number
  J: number
  rep: string | null
  members: GridCell[]
}

export interface CompressedPayload {
  rows: number
  cols: number
  R: number
  S: number
  cells: CoarseCell[]
}

export interface CompressedResponse {
  v: number
  revision: number
  compressed: CompressedPayload
}

export interface ExpansionPlan {
  selected: [number, number]
  noop: boolean
  expanded: { I: number; J: number; members: GridCell[] }[]
  compressed: { I: number; J: number; rep: string | null }[]
}

export interface ExpandResponse {
  v: number
  revision: number
  plan: ExpansionPlan
}

export interface Point {
  x: number
  y: number
}
