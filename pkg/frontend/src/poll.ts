// Live polling with watermark discipline: every page asks for trials above
// the last watermark, so no trial is ever missed or duplicated. Polling
// runs while the search is active and turns itself off once the run is
// paused or terminal; failures back off exponentially behind a stale-data
// signal instead of giving up.

import type { ApiClient, RunDescriptor, TrialRecord } from "./api.js";

const ACTIVE_STATUSES = new Set(["running", "pausing", "stopping"]);

export interface PollerCallbacks {
  onTrials(trials: TrialRecord[], watermark: number): void;
  onStatus(run: RunDescriptor): void;
  onStale(stale: boolean): void;
}

export interface PollerOptions {
  intervalMs?: number;
  maxBackoffMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

export class Poller {
  watermark = 0;
  private stopped = false;
  private readonly intervalMs: number;
  private readonly maxBackoffMs: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(
    private api: ApiClient,
    private runId: string,
    private callbacks: PollerCallbacks,
    options: PollerOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? 1000;
    this.maxBackoffMs = options.maxBackoffMs ?? 15000;
    this.sleep = options.sleep ?? defaultSleep;
  }

  stop(): void {
    this.stopped = true;
  }

  /** Poll until the run leaves the active statuses. Resolves with the last
   * descriptor seen (or null if stopped before one arrived). */
  async start(): Promise<RunDescriptor | null> {
    let backoff = this.intervalMs;
    let last: RunDescriptor | null = null;
    while (!this.stopped) {
      try {
        const page = await this.api.trials(this.runId, this.watermark);
        if (page.trials.length > 0) {
          this.callbacks.onTrials(page.trials, page.latest_trial_id);
        }
        this.watermark = Math.max(this.watermark, page.latest_trial_id);
        const run = await this.api.run(this.runId);
        last = run;
        this.callbacks.onStatus(run);
        this.callbacks.onStale(false);
        backoff = this.intervalMs;
        if (!ACTIVE_STATUSES.has(run.status)) {
          break; // off when paused/finished/failed
        }
      } catch {
        this.callbacks.onStale(true);
        backoff = Math.min(backoff * 2, this.maxBackoffMs);
      }
      await this.sleep(backoff);
    }
    return last;
  }
}
