// App wiring: run selection, control verbs, live polling, and re-rendering
// the overview + profiler from fresh API payloads. Panels are pure
// functions of the payloads and the view state; the only way the search
// space changes is a server-confirmed command.

import { ApiClient, ApiError } from "./api.js";
import type { ProfilerData } from "./profiler.js";
import type { SpaceDeltaJson } from "./api.js";
import { clear, h } from "./dom.js";
import { renderOverview } from "./overview.js";
import { renderProfiler } from "./profiler.js";
import { Poller } from "./poll.js";
import {
  ViewState,
  initialViewState,
  selectRun,
  setFocusMode,
  toggleAlgorithm,
  toggleHyperpartition,
} from "./state.js";

const api = new ApiClient("");
let state: ViewState = initialViewState();
let poller: Poller | null = null;
let refreshing = false;

const runomat = document.getElementById("run-select") as HTMLSelectElement;
const controls = document.getElementById("controls") as HTMLElement;
const banner = document.getElementById("banner") as HTMLElement;
const staleBanner = document.getElementById("stale") as HTMLElement;
const overviewHost = document.getElementById("overview-host") as HTMLElement;
const profilerHost = document.getElementById("profiler-host") as HTMLElement;

function showBanner(message: string, kind: "error" | "warn" | "ok"): void {
  banner.textContent = message;
  banner.className = `banner ${kind}`;
  banner.hidden = message === "";
}

async function loadRunList(): Promise<void> {
  const runs = await api.runs();
  clear(runomat);
  runomat.append(h("option", { value: "" }, "select a run…"));
  for (const run of runs) {
    runomat.append(
      h("option", { value: run.id }, `${run.id} · ${run.status}`));
  }
  if (state.runId) runomat.value = state.runId;
}

async function sendCommand(kind: string): Promise<void> {
  if (!state.runId) return;
  try {
    const desc = await api.command(state.runId, { kind });
    showBanner(`${kind}: run is ${desc.status}`, "ok");
    if (desc.status === "running") startPolling();
    await refresh();
  } catch (err) {
    showBanner(describeError(err), "error");
  }
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}

async function submitDelta(delta: SpaceDeltaJson): Promise<void> {
  if (!state.runId) return;
  try {
    await api.command(state.runId, { kind: "reconfigure", deltas: [delta] });
    showBanner("search space updated", "ok");
    await refresh(); // re-render only from the confirmed server state
  } catch (err) {
    // rejection surfaces inline; the user's edit stays on screen untouched
    showBanner(describeError(err), "error");
  }
}

async function refresh(): Promise<void> {
  if (!state.runId || refreshing) return;
  refreshing = true;
  try {
    const [summary, algorithms, space] = await Promise.all([
      api.summary(state.runId),
      api.algorithms(state.runId),
      api.space(state.runId),
    ]);
    const hyperpartitions = state.expandedAlgorithm
      ? await api.hyperpartitions(state.runId, state.expandedAlgorithm)
      : null;
    let scatters = null;
    if (state.expandedHyperpartition) {
      const info = space.hyperpartitions.find(
        (hp) => hp.id === state.expandedHyperpartition);
      if (info) {
        scatters = await Promise.all(
          info.tunables.map((name) =>
            api.scatter(state.runId!, info.id, name)));
      }
    }
    const data: ProfilerData = {
      overview: summary.overview, algorithms, space, hyperpartitions, scatters,
    };
    clear(overviewHost);
    overviewHost.append(
      renderOverview(summary.overview, summary.run, state.focusMode, {
        onToggleFocus: (on) => {
          state = setFocusMode(state, on);
          void refresh();
        },
      }));
    clear(profilerHost);
    profilerHost.append(
      renderProfiler(data, state, {
        onSelectAlgorithm: (name) => {
          state = toggleAlgorithm(state, name);
          void refresh();
        },
        onSelectHyperpartition: (id) => {
          state = toggleHyperpartition(state, id);
          void refresh();
        },
        onDelta: (delta) => void submitDelta(delta),
        onWarning: (message) => showBanner(message, "warn"),
      }));
  } finally {
    refreshing = false;
  }
}

function startPolling(): void {
  poller?.stop();
  if (!state.runId) return;
  poller = new Poller(api, state.runId, {
    onTrials: () => void refresh(),
    onStatus: (run) => {
      staleBanner.hidden = true;
      const option = runomat.querySelector(`option[value="${run.id}"]`);
      if (option) option.textContent = `${run.id} · ${run.status}`;
    },
    onStale: (stale) => {
      staleBanner.hidden = !stale;
    },
  });
  void poller.start();
}

runomat.addEventListener("change", () => {
  state = selectRun(state, runomat.value || null);
  showBanner("", "ok");
  if (state.runId) {
    void refresh().then(() => startPolling());
  } else {
    clear(overviewHost);
    clear(profilerHost);
    poller?.stop();
  }
});

for (const verb of ["start", "pause", "resume", "stop"]) {
  controls.append(
    h("button", { class: "control", click: () => void sendCommand(verb) },
      verb));
}

void loadRunList().catch((err) => showBanner(describeError(err), "error"));
setInterval(() => void loadRunList().catch(() => undefined), 5000);
