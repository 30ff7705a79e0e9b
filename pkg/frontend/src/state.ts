/**
 * Session state machine for the elicitation screens.
 *
 * Invariants enforced here rather than in the DOM layer:
 *  - a question is shown at most once; once its answer is accepted the
 *    state only ever advances (the envelope's `answered` counter is
 *    monotone);
 *  - submissions are serialized: a second submit while one is in flight
 *    is refused;
 *  - a 409 from the service (the question advanced elsewhere, e.g. in a
 *    second tab) surfaces as a conflict banner and triggers a re-fetch.
 */

import {
  ApiClient,
  ApiErrorDetail,
  AttributeDoc,
  FinalizeResponse,
  Question,
  QuestionEnvelope,
  ServiceError,
} from "./api.js";

export type SessionPhase = "idle" | "asking" | "submitting" | "complete" | "finalized";

export interface SessionState {
  phase: SessionPhase;
  sessionId: string | null;
  question: Question | null;
  answered: number;
  total: number;
  error: ApiErrorDetail | null;
  conflict: boolean;
  finalized: FinalizeResponse | null;
}

export const initialSessionState: SessionState = {
  phase: "idle",
  sessionId: null,
  question: null,
  answered: 0,
  total: 0,
  error: null,
  conflict: false,
  finalized: null,
};

function fromEnvelope(state: SessionState, envelope: QuestionEnvelope): SessionState {
  if (envelope.answered < state.answered) {
    // never step backwards onto an already-answered question
    return state;
  }
  return {
    ...state,
    phase: envelope.done ? "complete" : "asking",
    question: envelope.done ? null : envelope.question ?? null,
    answered: envelope.answered,
    total: envelope.total,
    error: null,
    conflict: false,
  };
}

/**
 * Drives one assessment session against the service; the DOM layer (and
 * the tests) observe state through `subscribe`.
 */
export class SessionController {
  private state: SessionState = initialSessionState;
  private listeners: ((s: SessionState) => void)[] = [];

  constructor(private readonly client: ApiClient) {}

  get current(): SessionState {
    return this.state;
  }

  subscribe(listener: (s: SessionState) => void): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(next: SessionState): void {
    this.state = next;
    for (const listener of this.listeners) listener(next);
  }

  async start(attributes: AttributeDoc[], ceCount = 1): Promise<void> {
    const created = await this.client.createSession(attributes, ceCount);
    this.update(fromEnvelope(
      { ...initialSessionState, sessionId: created.session_id },
      created));
  }

  /** Submit an answer to the currently shown question. */
  async answer(value: number): Promise<void> {
    const { question, sessionId, phase } = this.state;
    if (phase !== "asking" || question === null || sessionId === null) {
      throw new Error("no question is awaiting an answer");
    }
    this.update({ ...this.state, phase: "submitting" });
    try {
      const envelope = await this.client.submitAnswer(
        sessionId, question.index, value);
      this.update(fromEnvelope(this.state, envelope));
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        // the question advanced elsewhere: surface the banner and re-sync
        const envelope = await this.client.getQuestion(sessionId);
        this.update({
          ...fromEnvelope(this.state, envelope),
          conflict: true,
        });
        return;
      }
      if (err instanceof ServiceError) {
        this.update({ ...this.state, phase: "asking", error: err.detail });
        return;
      }
      throw err;
    }
  }

  async finalize(label = ""): Promise<FinalizeResponse> {
    const { sessionId, phase } = this.state;
    if (phase !== "complete" || sessionId === null) {
      throw new Error("session is not complete");
    }
    const finalized = await this.client.finalize(sessionId, label);
    this.update({ ...this.state, phase: "finalized", finalized });
    return finalized;
  }

  /** Answer every remaining question from a script (kiosk/testing path). */
  async runScript(answers: number[]): Promise<void> {
    for (const value of answers) {
      if (this.state.phase !== "asking") break;
      await this.answer(value);
      if (this.state.error) {
        throw new ServiceError(400, this.state.error);
      }
    }
  }
}
