/**
 * Explorer controller: a single-user session over the registry API.
 *
 * Holds the wallet and match-board view states and exposes the three user
 * flows (refresh wallet, explore matches, run what-if). Errors surface as
 * view-state banners rather than thrown exceptions so the views stay
 * renderable. Pinning an enroll target is client-side planning state only;
 * no server mutation happens until the user actually posts a credential.
 */

import { RegistryClient, RegistryError, ServiceUnreachable } from "./api.js";
import { GraphIndex } from "./graphIndex.js";
import {
  MatchBoardState,
  WalletViewState,
  emptyBoard,
  emptyWallet,
  walletEntry,
} from "./state.js";

export class Explorer {
  wallet: WalletViewState = emptyWallet("");
  board: MatchBoardState = emptyBoard("");

  constructor(
    readonly client: RegistryClient,
    readonly at: string,
  ) {}

  private describe(err: unknown): string {
    if (err instanceof ServiceUnreachable) {
      return "service unreachable, check the registry and refresh";
    }
    if (err instanceof RegistryError) {
      return `${err.code}: ${err.message}`;
    }
    throw err;
  }

  async refreshWallet(holder: string): Promise<WalletViewState> {
    const next = emptyWallet(holder);
    try {
      await this.client.entity(holder); // fail fast on unknown holders
      const index = GraphIndex.parse(await this.client.exportGraph());
      for (const credId of index.credentialsOf(holder)) {
        const verdict = await this.client.validity(credId, this.at);
        next.entries.push(
          walletEntry(
            credId,
            index.labelOf(credId),
            index.classOf(credId),
            index.labelOf(index.issuerOf(credId)),
            verdict,
          ),
        );
      }
    } catch (err) {
      next.error = this.describe(err);
      next.entries = [];
    }
    this.wallet = next;
    return next;
  }

  async exploreMatches(holder: string, k: number): Promise<MatchBoardState> {
    const next = emptyBoard(holder);
    try {
      next.rows = await this.client.matches(holder, k, this.at);
    } catch (err) {
      next.banner = this.describe(err);
    }
    this.board = next;
    return next;
  }

  /** Select a row; the gap panel shows the server's `missing` verbatim. */
  selectJob(jobId: string): MatchBoardState {
    const row = this.board.rows.find((r) => r.job === jobId);
    this.board = {
      ...this.board,
      selectedJob: row ? jobId : null,
      gap: row ? row.missing : [],
    };
    this.wallet = { ...this.wallet, selectedJob: this.board.selectedJob };
    return this.board;
  }

  async loadPathway(jobId: string): Promise<MatchBoardState> {
    try {
      const pathway = await this.client.pathway(
        this.board.holder,
        jobId,
        this.at,
      );
      this.board = { ...this.board, pathway, banner: null };
    } catch (err) {
      this.board = { ...this.board, banner: this.describe(err) };
    }
    return this.board;
  }

  async runWhatIf(templateId: string): Promise<MatchBoardState> {
    try {
      const deltas = await this.client.whatIf(
        this.board.holder,
        templateId,
        this.at,
      );
      this.board = { ...this.board, deltas, banner: null };
      this.wallet = { ...this.wallet, pendingTemplate: templateId };
    } catch (err) {
      // unknown-template and friends render as a toast-style banner
      this.board = { ...this.board, deltas: [], banner: this.describe(err) };
    }
    return this.board;
  }

  pinTemplate(templateId: string): MatchBoardState {
    if (!this.board.pinnedTemplates.includes(templateId)) {
      this.board = {
        ...this.board,
        pinnedTemplates: [...this.board.pinnedTemplates, templateId],
      };
    }
    return this.board;
  }
}
