// View state with the on-demand visibility invariants enforced by
// construction: the hyperpartition view exists only under an expanded
// algorithm, the hyperparameter view only under an expanded hyperpartition.

export interface ViewState {
  runId: string | null;
  expandedAlgorithm: string | null;
  expandedHyperpartition: string | null;
  focusMode: boolean;
  watermark: number;
}

export function initialViewState(): ViewState {
  return {
    runId: null,
    expandedAlgorithm: null,
    expandedHyperpartition: null,
    focusMode: false,
    watermark: 0,
  };
}

export function selectRun(state: ViewState, runId: string | null): ViewState {
  if (runId === state.runId) return state;
  return { ...initialViewState(), runId, focusMode: state.focusMode };
}

export function toggleAlgorithm(state: ViewState, name: string): ViewState {
  if (state.expandedAlgorithm === name) {
    // collapsing the algorithm hides everything beneath it
    return { ...state, expandedAlgorithm: null, expandedHyperpartition: null };
  }
  return { ...state, expandedAlgorithm: name, expandedHyperpartition: null };
}

export function toggleHyperpartition(state: ViewState, id: string): ViewState {
  const algorithm = id.split(":", 1)[0];
  if (state.expandedAlgorithm !== algorithm) {
    return state; // hyperparameter view only opens under its visible parent
  }
  return {
    ...state,
    expandedHyperpartition: state.expandedHyperpartition === id ? null : id,
  };
}

export function setFocusMode(state: ViewState, on: boolean): ViewState {
  return { ...state, focusMode: on };
}

export function advanceWatermark(state: ViewState, watermark: number): ViewState {
  return watermark > state.watermark ? { ...state, watermark } : state;
}
