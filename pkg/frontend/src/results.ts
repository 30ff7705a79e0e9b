/**
 * View-models for the ranking table and the side-by-side comparison. The
 * cells carry the service's numbers formatted for display, nothing
 * recomputed.
 */

import { ComparisonDoc, EvaluationDoc } from "./api.js";

export interface RankingTable {
  slotColumns: string[];
  attributeColumns: string[];
  rows: {
    rank: number;
    materials: string[];
    perAttribute: string[];
    expectedUtility: string;
  }[];
  errorCount: number;
  firedRules: string[];
}

const formatEu = (value: number) => value.toFixed(4);

export function buildRankingTable(doc: EvaluationDoc): RankingTable {
  const first = doc.ranking[0];
  const slotColumns = first ? Object.keys(first.alternative.assignment) : [];
  const attributeColumns = first ? Object.keys(first.per_attribute) : [];
  return {
    slotColumns,
    attributeColumns,
    rows: doc.ranking.map((entry) => ({
      rank: entry.rank,
      materials: slotColumns.map((slot) => entry.alternative.assignment[slot]),
      perAttribute: attributeColumns.map((attr) => formatEu(entry.per_attribute[attr])),
      expectedUtility: formatEu(entry.expected_utility),
    })),
    errorCount: doc.errors.length,
    firedRules: [
      ...doc.trace.restriction_rules_fired,
      ...doc.trace.configuration_rules_fired,
    ],
  };
}

export interface ComparisonRow {
  slot: string;
  conventional: string;
  integrated: string;
  agrees: boolean;
}

export interface ComparisonViewModel {
  rows: ComparisonRow[];
  conventionalUtility: string;
  integratedUtility: string;
  picksMatch: boolean;
  verdict: string;
  ranking: RankingTable | null;
}

export function buildComparisonViewModel(doc: ComparisonDoc): ComparisonViewModel {
  const slots = Object.keys(doc.conventional.pick.assignment);
  const rows = slots.map((slot) => ({
    slot,
    conventional: doc.conventional.pick.assignment[slot],
    integrated: doc.integrated.pick.assignment[slot],
    agrees: doc.agreement[slot] === true,
  }));
  return {
    rows,
    conventionalUtility: formatEu(doc.conventional.expected_utility),
    integratedUtility: formatEu(doc.integrated.expected_utility),
    picksMatch: doc.picks_match,
    verdict: doc.picks_match
      ? "Both modes selected the same components."
      : "The modes disagree: the heuristic layer assumed a different designer.",
    ranking: doc.ranking ? buildRankingTable(doc.ranking) : null,
  };
}
