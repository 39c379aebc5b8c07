import { describe, expect, it } from 'vitest'

import { ApiClient, type FetchLike } from '../src/api.js'

function fakeFetch(
  handler: (url: string, init?: RequestInit) => { status: number; body: unknown },
): { fetchFn: FetchLike; calls: { url: string; init?: RequestInit }[] } {
  const calls: { url: string; init?: RequestInit }[] = []
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({ url, init })
    const { status, body } = handler(url, init)
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    })
  }
  return { fetchFn, calls }
}

describe('ApiClient', () => {
  it('PUTs weights and parses the revision-tagged grid', async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: { v: 1, revision: 3, grid: { rows: 2, cols: 2, n: 3, empty: 1, cells: [] } },
    }))
    const api = new ApiClient('http://svc', fetchFn)
    const resp = await api.setWeights('abc', [0.5, 0.5])
    expect(resp.revision).toBe(3)
    expect(calls[0].url).toBe('http://svc/session/abc/weights')
    expect(calls[0].init?.method).toBe('PUT')
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ alphas: [0.5, 0.5] })
  })

  it('encodes mask and cell parameters in query strings', async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: { v: 1, revision: 0, compressed: { rows: 1, cols: 1, R: 2, S: 3, cells: [] } },
    }))
    const api = new ApiClient('', fetchFn)
    await api.compressed('s', 2, 3)
    expect(calls[0].url).toBe('/session/s/compressed?R=2&S=3')
  })

  it('throws with status and detail on error responses', async () => {
    const { fetchFn } = fakeFetch(() => ({ status: 400, body: { detail: 'bad weights' } }))
    const api = new ApiClient('', fetchFn)
    await expect(api.setWeights('s', [2, 2])).rejects.toThrow(/400/)
  })
})
