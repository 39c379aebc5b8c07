/** Browser wire-up: weight dial on the left, grid canvas on the right,
 * mask-size inputs for level-of-detail, click-to-expand navigation.
 * Talks only to the layout service's JSON API on the same origin. */

import { ApiClient } from './api.js'
import { anchorAlpha, anchorPositions, dialToWeights } from './dial.js'
import { renderGrid } from './render.js'
import { debounce, initialViewState, RevisionGate } from './state.js'
import type { GridPayload, Point } from './types.js'

const DIAL_DEBOUNCE_MS = 150
const DIAL_RADIUS = 80
const CELL_SIZE = 14

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing element #${id}`)
  return node as T
}

async function boot(): Promise<void> {
  const api = new ApiClient('')
  const gate = new RevisionGate()
  const view = initialViewState()

  const manifestText = el<HTMLTextAreaElement>('manifest')
  const status = el<HTMLElement>('status')
  const dialCanvas = el<HTMLCanvasElement>('dial')
  const gridCanvas = el<HTMLCanvasElement>('grid')

  let sessionId = ''
  let featureNames: string[] = []
  let anchors: Point[] = []
  let dial: Point = { x: 0, y: 0 }
  let weights: number[] = []
  let lastGrid: GridPayload | null = null

  function drawDial(): void {
    const ctx = dialCanvas.getContext('2d')
    if (!ctx) return
    const cx = dialCanvas.width / 2
    const cy = dialCanvas.height / 2
    ctx.clearRect(0, 0, dialCanvas.width, dialCanvas.height)
    ctx.strokeStyle = '#999'
    ctx.beginPath()
    ctx.arc(cx, cy, DIAL_RADIUS, 0, 2 * Math.PI)
    ctx.stroke()
    anchors.forEach((a, i) => {
      const alpha = anchorAlpha(weights[i] ?? 0)
      ctx.globalAlpha = alpha
      ctx.fillStyle = '#335'
      ctx.beginPath()
      ctx.arc(cx + a.x, cy + a.y, 6, 0, 2 * Math.PI)
      ctx.fill()
      ctx.font = '12px sans-serif'
      ctx.fillText(featureNames[i] ?? `f${i}`, cx + a.x + 9, cy + a.y + 4)
      ctx.globalAlpha = 1
    })
    ctx.fillStyle = '#e80'
    ctx.beginPath()
    ctx.arc(cx + dial.x, cy + dial.y, 7, 0, 2 * Math.PI)
    ctx.fill()
  }

  function drawGrid(): void {
    if (!lastGrid) return
    const ctx = gridCanvas.getContext('2d')
    if (!ctx) return
    gridCanvas.width = lastGrid.cols * CELL_SIZE
    gridCanvas.height = lastGrid.rows * CELL_SIZE
    renderGrid(ctx, lastGrid, { cellSize: CELL_SIZE, gridLines: true })
  }

  const pushWeights = debounce(async (alphas: number[]) => {
    if (!sessionId) return
    const resp = await api.setWeights(sessionId, alphas)
    if (!gate.accept(resp.revision)) return // stale: a newer update landed
    view.revision = resp.revision
    lastGrid = resp.grid
    status.textContent = `revision ${resp.revision}: ${resp.grid.rows}x${resp.grid.cols}, n=${resp.grid.n}`
    drawGrid()
  }, DIAL_DEBOUNCE_MS)

  function onDialMove(ev: MouseEvent): void {
    const rect = dialCanvas.getBoundingClientRect()
    dial = {
      x: ev.clientX - rect.left - dialCanvas.width / 2,
      y: ev.clientY - rect.top - dialCanvas.height / 2,
    }
    weights = dialToWeights(dial, anchors)
    drawDial()
    pushWeights(weights)
  }

  let dragging = false
  dialCanvas.addEventListener('mousedown', (ev) => {
    dragging = true
    onDialMove(ev)
  })
  dialCanvas.addEventListener('mousemove', (ev) => {
    if (dragging) onDialMove(ev)
  })
  window.addEventListener('mouseup', () => {
    dragging = false
  })

  el<HTMLButtonElement>('connect').addEventListener('click', async () => {
    try {
      const manifest = JSON.parse(manifestText.value)
      const session = await api.createSession(manifest)
      sessionId = session.session_id
      featureNames = session.feature_sets
      anchors = anchorPositions(featureNames.length, DIAL_RADIUS)
      dial = { x: 0, y: 0 }
      weights = dialToWeights(dial, anchors)
      status.textContent = `session ${sessionId}: ${session.sample_size} samples`
      drawDial()
      pushWeights(weights)
      pushWeights.flush()
    } catch (err) {
      status.textContent = String(err)
    }
  })

  gridCanvas.addEventListener('click', async (ev) => {
    if (!sessionId || !lastGrid) return
    const rect = gridCanvas.getBoundingClientRect()
    const R = Number(el<HTMLInputElement>('maskR').value) || 1
    const S = Number(el<HTMLInputElement>('maskS').value) || 1
    const i = Math.floor((ev.clientY - rect.top) / CELL_SIZE)
    const j = Math.floor((ev.clientX - rect.left) / CELL_SIZE)
    const I = Math.floor(i / R)
    const J = Math.floor(j / S)
    const resp = await api.expand(sessionId, I, J, R, S)
    if (!gate.accept(resp.revision)) return
    const count = resp.plan.expanded.reduce((s, e) => s + e.members.length, 0)
    view.expanded = { I, J }
    status.textContent = `expanded (${I}, ${J}): ${count} members in cross`
  })

  status.textContent = 'paste a bundle manifest and connect'
}

boot().catch((err) => {
  const status = document.getElementById('status')
  if (status) status.textContent = String(err)
})
