/**
 * Typed client for the evaluation service. Every number shown in the UI
 * originates from these responses; the client performs no numeric work of
 * its own.
 */

export interface AttributeDoc {
  id: string;
  label: string;
  units: string;
  range_worst: number;
  range_best: number;
  direction: "increasing_preferred" | "decreasing_preferred";
}

export type QuestionKind = "certainty_equivalent" | "probability_equivalence";

export interface Question {
  index: number;
  kind: QuestionKind;
  attribute: string;
  step: number;
  prompt: string;
  domain: [number, number];
}

export interface QuestionEnvelope {
  done: boolean;
  answered: number;
  total: number;
  question?: Question;
}

export interface SessionCreated extends QuestionEnvelope {
  session_id: string;
}

export interface FinalizeResponse {
  profile_id: string;
  fingerprint: string;
  profile_fingerprint: string;
  profile: ProfileDoc;
}

export interface ProfileDoc {
  format_version: string;
  attributes: AttributeDoc[];
  utilities: { attribute: string; risk_coefficient: number; a: number; b: number }[];
  scaling_constants: number[];
  master_constant: number | null;
  aggregation_mode: string;
  fit_residuals: number[][];
}

export interface BetaFitRequest {
  lower: number;
  upper: number;
  p?: number;
  q?: number;
  mode?: number;
  mean?: number;
  samples?: number;
}

export interface BetaFitResponse {
  beta: { lower: number; upper: number; p: number; q: number };
  mean: number;
  mode: number | null;
  density: [number, number][];
}

export interface RankedEntryDoc {
  rank: number;
  alternative: { index: number; assignment: Record<string, string> };
  expected_utility: number;
  per_attribute: Record<string, number>;
}

export interface EvaluationDoc {
  ranking: RankedEntryDoc[];
  errors: { alternative: unknown; error: ApiErrorDetail }[];
  trace: {
    restriction_removals: { rule: string; slot: string; material: string }[];
    restriction_rules_fired: string[];
    configuration_rules_fired: string[];
    selection_events: unknown[];
  };
  profile_fingerprint: string;
}

export interface ModeOutcomeDoc {
  mode: string;
  pick: { index: number; assignment: Record<string, string> };
  expected_utility: number;
  per_attribute: Record<string, number>;
}

export interface ComparisonDoc {
  conventional: ModeOutcomeDoc;
  integrated: ModeOutcomeDoc;
  agreement: Record<string, boolean>;
  picks_match: boolean;
  selection_events: { rule: string; slot: string; material: string; outcome: string }[];
  ranking: EvaluationDoc | null;
}

export interface StoreListing {
  id: string;
  created_at: number;
  fingerprint: string;
}

export interface ApiErrorDetail {
  code: string;
  message: string;
  field?: string;
  low?: number;
  high?: number;
  feasible_low?: number;
  feasible_high?: number;
}

/** Error carrying the service's structured detail. */
export class ServiceError extends Error {
  constructor(readonly status: number, readonly detail: ApiErrorDetail) {
    super(detail.message);
    this.name = "ServiceError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(readonly baseUrl: string,
              private readonly fetchFn: FetchLike = (input, init) => fetch(input, init)) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json();
    if (!response.ok) {
      const detail: ApiErrorDetail = payload?.error ??
        { code: "unknown", message: `request failed with ${response.status}` };
      throw new ServiceError(response.status, detail);
    }
    return payload as T;
  }

  createSession(attributes: AttributeDoc[], ceCount = 1): Promise<SessionCreated> {
    return this.request("POST", "/sessions", { attributes, ce_count: ceCount });
  }

  getQuestion(sessionId: string): Promise<QuestionEnvelope> {
    return this.request("GET", `/sessions/${sessionId}/question`);
  }

  submitAnswer(sessionId: string, index: number, answer: number): Promise<QuestionEnvelope> {
    return this.request("POST", `/sessions/${sessionId}/answers`, { index, answer });
  }

  finalize(sessionId: string, label = ""): Promise<FinalizeResponse> {
    return this.request("POST", `/sessions/${sessionId}/finalize`, { label });
  }

  fitBeta(req: BetaFitRequest): Promise<BetaFitResponse> {
    return this.request("POST", "/beta/fit", req);
  }

  listKbs(): Promise<{ kbs: StoreListing[] }> {
    return this.request("GET", "/kbs");
  }

  storeKb(doc: unknown): Promise<{ kb_id: string; fingerprint: string; name: string }> {
    return this.request("POST", "/kbs", doc);
  }

  getKb(id: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/kbs/${id}`);
  }

  listProfiles(): Promise<{ profiles: StoreListing[] }> {
    return this.request("GET", "/profiles");
  }

  evaluate(kbId: string, facts: Record<string, unknown>, profileId: string,
           mode: "integrated" | "compare"): Promise<EvaluationDoc | ComparisonDoc> {
    return this.request("POST", "/evaluate",
                        { kb_id: kbId, facts, profile_id: profileId, mode });
  }
}
