// Deterministic plain-text rendering of the three views. Numbers are printed
// exactly as the server sent them (no client rounding), which makes rendered
// boards byte-traceable to responses and stable under snapshot testing.

import type { MatchBoardState, WalletViewState } from "./state.js";

function num(n: number): string {
  // JSON.stringify of the parsed number reproduces the wire form for the
  // 6-decimal values the server emits
  return JSON.stringify(n);
}

export function renderWallet(state: WalletViewState): string {
  const lines: string[] = [`WALLET ${state.holder}`];
  if (state.error !== null) {
    lines.push(`  ! ${state.error}`);
    return lines.join("\n");
  }
  if (state.entries.length === 0) {
    lines.push("  (empty, add a credential to get matched)");
    return lines.join("\n");
  }
  for (const e of state.entries) {
    const flag =
      e.status === "Valid" ? "ok" : `INVALID ${e.reasons.join(",")}`;
    lines.push(`  [${flag}] ${e.label} <${e.subtype}> issued by ${e.issuer}`);
  }
  return lines.join("\n");
}

export function renderMatchBoard(state: MatchBoardState): string {
  const lines: string[] = [`MATCHES for ${state.holder}`];
  if (state.banner !== null) {
    lines.push(`  ! ${state.banner}`);
  }
  for (const r of state.rows) {
    const marker = r.job === state.selectedJob ? ">" : " ";
    lines.push(`  ${marker} ${r.job}  score=${num(r.score)}`);
  }
  if (state.selectedJob !== null) {
    lines.push(
      state.gap.length === 0
        ? `  gap(${state.selectedJob}): none, full coverage`
        : `  gap(${state.selectedJob}): ${state.gap.join(", ")}`,
    );
  }
  if (state.pathway !== null) {
    lines.push(
      `  pathway: ${state.pathway.credentials.join(" + ")}` +
        ` (cost ${num(state.pathway.total_cost)})`,
    );
  }
  if (state.pinnedTemplates.length > 0) {
    lines.push(`  enroll targets: ${state.pinnedTemplates.join(", ")}`);
  }
  return lines.join("\n");
}

export function renderWhatIf(state: MatchBoardState): string {
  const changed = state.deltas.filter((d) => d.new_score !== d.old_score);
  if (changed.length === 0) {
    return "WHAT-IF: no change";
  }
  const lines = ["WHAT-IF"];
  for (const d of changed) {
    lines.push(`  ${d.job}: ${num(d.old_score)} -> ${num(d.new_score)}`);
  }
  return lines.join("\n");
}
