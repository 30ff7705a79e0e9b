/**
 * View-model for the lottery question screens: the two option cards
 * (sure thing vs lottery) and the admissible answer control. All numbers
 * come from the question payload.
 */

import { Question } from "./api.js";

export interface LotteryViewModel {
  kind: Question["kind"];
  heading: string;
  prompt: string;
  sureThingTitle: string;
  sureThingBody: string;
  lotteryTitle: string;
  lotteryBody: string;
  control: {
    min: number;
    max: number;
    /** slider progress hint only; the service validates the real answer */
    step: number | "any";
    unitsHint: string;
  };
  progress: { answered: number; total: number };
}

export function buildLotteryViewModel(question: Question, answered: number,
                                      total: number): LotteryViewModel {
  if (question.kind === "certainty_equivalent") {
    const [low, high] = question.domain;
    return {
      kind: question.kind,
      heading: `Certainty equivalent — ${question.attribute}`,
      prompt: question.prompt,
      sureThingTitle: "Sure thing",
      sureThingBody: "A guaranteed level you set with the slider.",
      lotteryTitle: "Lottery (50/50)",
      lotteryBody: "Equal chances of the best and the worst level of this attribute.",
      control: { min: low, max: high, step: "any", unitsHint: question.attribute },
      progress: { answered, total },
    };
  }
  return {
    kind: question.kind,
    heading: `Importance probability — ${question.attribute}`,
    prompt: question.prompt,
    sureThingTitle: "Sure thing",
    sureThingBody:
      "This attribute at its best, every other attribute at its worst.",
    lotteryTitle: "Lottery (probability pi)",
    lotteryBody:
      "Everything at its best with probability pi, everything at its worst otherwise.",
    control: { min: question.domain[0], max: question.domain[1], step: "any", unitsHint: "pi" },
    progress: { answered, total },
  };
}
