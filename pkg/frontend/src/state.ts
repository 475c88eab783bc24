import type { OfferPayload, RedispatchPayload } from './types';

export type OperationKind = 'offer' | 'pre_offer' | 'redispatch';

export interface ConsoleState {
  activePlant: string;
  operation: OperationKind;
  availabilityMw: number;
  dateIso: string;
  lastOffer: OfferPayload | null;
  lastRedispatch: RedispatchPayload | null;
  lastRedispatchAt: number | null; // epoch ms of the last decision fetch
}

export function initialState(): ConsoleState {
  return {
    activePlant: 'elpaso',
    operation: 'offer',
    availabilityMw: 69,
    dateIso: '',
    lastOffer: null,
    lastRedispatch: null,
    lastRedispatchAt: null,
  };
}

export interface StateProblem {
  field: 'availability' | 'date';
  message: string;
}

export function validateState(state: ConsoleState): StateProblem[] {
  const problems: StateProblem[] = [];
  if (!(state.availabilityMw >= 0) || Number.isNaN(state.availabilityMw)) {
    problems.push({ field: 'availability', message: 'availability must be >= 0 MW' });
  }
  if (state.dateIso !== '' && Number.isNaN(Date.parse(state.dateIso))) {
    problems.push({ field: 'date', message: `cannot parse date '${state.dateIso}'` });
  }
  return problems;
}

/** Decision payloads older than this are flagged as stale in the monitor. */
export const STALE_DECISION_MS = 15 * 60 * 1000;

export function isStale(state: ConsoleState, nowMs: number): boolean {
  return (
    state.lastRedispatchAt !== null &&
    nowMs - state.lastRedispatchAt > STALE_DECISION_MS
  );
}
