/**
 * View state for the explorer. Invariant: every field mirrors data the
 * server returned; nothing here is computed client-side beyond grouping.
 */

import type { MatchRow, Pathway, Verdict, WhatIfRow } from "./api.js";

export interface WalletEntry {
  credential: string;
  label: string;
  subtype: string;
  issuer: string;
  status: "Valid" | "Invalid";
  reasons: string[];
}

export interface WalletViewState {
  holder: string;
  entries: WalletEntry[];
  selectedJob: string | null;
  pendingTemplate: string | null;
  error: string | null;
}

export interface MatchBoardState {
  holder: string;
  rows: MatchRow[]; // server order, never re-sorted client-side
  selectedJob: string | null;
  gap: string[]; // the selected row's `missing`, verbatim
  pathway: Pathway | null;
  pinnedTemplates: string[];
  deltas: WhatIfRow[];
  banner: string | null;
}

export function emptyWallet(holder: string): WalletViewState {
  return {
    holder,
    entries: [],
    selectedJob: null,
    pendingTemplate: null,
    error: null,
  };
}

export function emptyBoard(holder: string): MatchBoardState {
  return {
    holder,
    rows: [],
    selectedJob: null,
    gap: [],
    pathway: null,
    pinnedTemplates: [],
    deltas: [],
    banner: null,
  };
}

export function walletEntry(
  credential: string,
  label: string,
  subtype: string,
  issuer: string,
  verdict: Verdict,
): WalletEntry {
  return {
    credential,
    label,
    subtype,
    issuer,
    status: verdict.status,
    reasons: verdict.reasons,
  };
}
