/** View-state plumbing: debounced interactions and latest-revision-wins
 * handling of out-of-order server responses. The view renders exactly one
 * revision at a time. */

export type ViewMode = 'sample' | 'full' | 'compressed'

export interface GridViewState {
  revision: number
  mode: ViewMode
  mask: { R: number; S: number }
  expanded: { I: number; J: number } | null
}

export function initialViewState(): GridViewState {
  return { revision: 0, mode: 'sample', mask: { R: 1, S: 1 }, expanded: null }
}

export interface Debounced<A extends unknown[]> {
  (...args: A): void
  cancel(): void
  flush(): void
}

/** Trailing-edge debounce: a burst of calls produces exactly one
 * invocation with the last arguments, delayMs after the burst ends. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null
  let pending: A | null = null
  const debounced = (...args: A) => {
    pending = args
    if (timer !== null) clearTimeout(timer)
    timer = setTimeout(() => {
      timer = null
      const args2 = pending as A
      pending = null
      fn(...args2)
    }, delayMs)
  }
  debounced.cancel = () => {
    if (timer !== null) clearTimeout(timer)
    timer = null
    pending = null
  }
  debounced.flush = () => {
    if (timer === null) return
    clearTimeout(timer)
    timer = null
    const args = pending as A
    pending = null
    fn(...args)
  }
  return debounced
}

/** Latest-revision-wins gate for asynchronous responses. A response is
 * applied only if its revision is at least the newest one seen so far;
 * stale responses are discarded, never rendered. */
export class RevisionGate {
  private newest = -1

  /** Returns true if the response should be applied to the view. */
  accept(revision: number): boolean {
    if (revision < this.newest) return false
    this.newest = revision
    return true
  }

  get current(): number {
    return this.newest
  }
}
