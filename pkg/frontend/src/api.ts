/** Thin typed client over the layout service's JSON API. The fetch
 * implementation is injectable so tests can run without a server. */

import type {
  CompressedResponse,
  ExpandResponse,
  SessionResponse,
  WeightsResponse,
} from './types.js'

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init)
    if (!resp.ok) {
      const detail = await resp.text()
      throw new Error(`${init?.method ?? 'GET'} ${path} -> ${resp.status}: ${detail}`)
    }
    return (await resp.json()) as T
  }

  createSession(manifest: unknown): Promise<SessionResponse> {
    return this.request('/session', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ manifest }),
    })
  }

  setWeights(sessionId: string, alphas: number[]): Promise<WeightsResponse> {
    return this.request(`/session/${sessionId}/weights`, {
      method: 'PUT',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ alphas }),
    })
  }

  compressed(sessionId: string, R: number, S: number): Promise<CompressedResponse> {
    return this.request(`/session/${sessionId}/compressed?R=${R}&S=${S}`)
  }

  expand(sessionId: string, I: number, J: number, R: number, S: number): Promise<ExpandResponse> {
    return this.request(`/session/${sessionId}/expand?I=${I}&J=${J}&R=${R}&S=${S}`)
  }
}
