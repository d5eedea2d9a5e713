/**
 * Typed client for the registry HTTP API.
 *
 * Every response is validated with zod before it reaches view code, so the
 * UI layer can rely on the shapes below. The client performs no scoring or
 * validity computation of its own.
 */

import { z } from "zod";

export const EntityBody = z.object({
  id: z.string(),
  class: z.string(),
  label: z.string(),
  attributes: z.record(z.unknown()),
});
export type EntityBody = z.infer<typeof EntityBody>;

export const Verdict = z.object({
  credential: z.string(),
  at: z.string(),
  status: z.enum(["Valid", "Invalid"]),
  reasons: z.array(z.string()),
  trace: z.array(z.string()),
});
export type Verdict = z.infer<typeof Verdict>;

export const Profile = z.object({
  holder: z.string(),
  held: z.record(z.array(z.string())),
});
export type Profile = z.infer<typeof Profile>;

export const MatchRow = z.object({
  job: z.string(),
  holder: z.string(),
  score: z.number(),
  matched: z.array(z.string()),
  missing: z.array(z.string()),
});
export type MatchRow = z.infer<typeof MatchRow>;

export const Pathway = z.object({
  credentials: z.array(z.string()),
  total_cost: z.number(),
  newly_covered: z.array(z.string()),
});
export type Pathway = z.infer<typeof Pathway>;

export const WhatIfRow = z.object({
  job: z.string(),
  old_score: z.number(),
  new_score: z.number(),
});
export type WhatIfRow = z.infer<typeof WhatIfRow>;

const ErrorBody = z.object({
  code: z.string(),
  message: z.string(),
  detail: z.record(z.unknown()).default({}),
});

/** Error body returned by the service, surfaced with its HTTP status. */
export class RegistryError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "RegistryError";
  }
}

/** Network-level failure: the service itself could not be reached. */
export class ServiceUnreachable extends Error {
  constructor(cause: unknown) {
    super("registry service unreachable");
    this.name = "ServiceUnreachable";
    this.cause = cause;
  }
}

export class RegistryClient {
  constructor(readonly baseUrl: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let res: Response;
    try {
      res = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ServiceUnreachable(err);
    }
    if (!res.ok) {
      const parsed = ErrorBody.safeParse(await res.json().catch(() => ({})));
      const code = parsed.success ? parsed.data.code : "http-error";
      const message = parsed.success ? parsed.data.message : res.statusText;
      throw new RegistryError(res.status, code, message);
    }
    return res;
  }

  private async getJson<T>(path: string, schema: z.ZodType<T>): Promise<T> {
    const res = await this.request(path);
    return schema.parse(await res.json());
  }

  private async postJson<T>(
    path: string,
    body: unknown,
    schema: z.ZodType<T>,
  ): Promise<T> {
    const res = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return schema.parse(await res.json());
  }

  entity(id: string): Promise<EntityBody> {
    return this.getJson(`/entities/${encodeURIComponent(id)}`, EntityBody);
  }

  createEntity(body: {
    id: string;
    class: string;
    label: string;
    attributes?: Record<string, unknown>;
  }): Promise<EntityBody> {
    return this.postJson("/entities", body, EntityBody);
  }

  validity(credential: string, at: string): Promise<Verdict> {
    return this.getJson(
      `/credentials/${encodeURIComponent(credential)}/validity?at=${at}`,
      Verdict,
    );
  }

  async explain(credential: string, at: string): Promise<string> {
    const res = await this.request(
      `/credentials/${encodeURIComponent(credential)}/explain?at=${at}`,
    );
    return res.text();
  }

  profile(holder: string, at: string, validOnly = true): Promise<Profile> {
    return this.getJson(
      `/holders/${encodeURIComponent(holder)}/profile?at=${at}&valid_only=${validOnly}`,
      Profile,
    );
  }

  matches(holder: string, k: number, at: string): Promise<MatchRow[]> {
    return this.getJson(
      `/holders/${encodeURIComponent(holder)}/matches?k=${k}&at=${at}`,
      z.array(MatchRow),
    );
  }

  pathway(holder: string, job: string, at: string): Promise<Pathway> {
    return this.postJson("/pathway", { holder, job, at }, Pathway);
  }

  whatIf(holder: string, template: string, at: string): Promise<WhatIfRow[]> {
    return this.postJson(
      "/what-if",
      { holder, template, at },
      z.array(WhatIfRow),
    );
  }

  /** Raw canonical graph text, used to list a holder's credentials. */
  async exportGraph(): Promise<string> {
    const res = await this.request("/export");
    return res.text();
  }
}
