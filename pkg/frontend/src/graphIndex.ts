// Lightweight read-only index over the canonical graph export. Used only to
// enumerate a holder's credentials and look up issuer labels; all verdicts
// and scores still come from the server.

import { z } from "zod";

const EntityLine = z.object({
  kind: z.literal("entity"),
  id: z.string(),
  class: z.string(),
  label: z.string(),
  attributes: z.record(z.unknown()),
});

const AssertionLine = z.object({
  kind: z.literal("assertion"),
  id: z.string(),
  subject: z.string(),
  relation: z.string(),
  object: z.string(),
  valid_from: z.string(),
  valid_to: z.string().nullable().optional(),
});

export type GraphEntity = z.infer<typeof EntityLine>;
export type GraphAssertion = z.infer<typeof AssertionLine>;

export class GraphIndex {
  readonly entities = new Map<string, GraphEntity>();
  readonly assertions: GraphAssertion[] = [];

  static parse(exportText: string): GraphIndex {
    const index = new GraphIndex();
    for (const line of exportText.split("\n")) {
      if (!line.trim()) continue;
      const raw = JSON.parse(line) as { kind?: string };
      if (raw.kind === "entity") {
        const e = EntityLine.parse(raw);
        index.entities.set(e.id, e);
      } else if (raw.kind === "assertion") {
        index.assertions.push(AssertionLine.parse(raw));
      }
      // header lines are ignored
    }
    return index;
  }

  /** Credential ids attached to a holder via is_about, sorted for stability. */
  credentialsOf(holder: string): string[] {
    return this.assertions
      .filter((a) => a.relation === "is_about" && a.object === holder)
      .map((a) => a.subject)
      .sort();
  }

  /** Issuing organization of a credential, or null when never issued. */
  issuerOf(credential: string): string | null {
    const output = this.assertions.find(
      (a) => a.relation === "has_output" && a.object === credential,
    );
    if (!output) return null;
    const agent = this.assertions.find(
      (a) => a.relation === "has_agent" && a.subject === output.subject,
    );
    return agent ? agent.object : null;
  }

  labelOf(id: string | null): string {
    if (id === null) return "(unknown)";
    return this.entities.get(id)?.label || id;
  }

  classOf(id: string): string {
    return this.entities.get(id)?.class ?? "(unknown)";
  }
}
