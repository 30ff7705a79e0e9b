/**
 * Beta-fitting screen: form state, request assembly, and the SVG path for
 * the density curve returned by the service. The curve points are scaled
 * into pixel coordinates for drawing; the displayed numeric results
 * (shape, mean, mode) are shown verbatim from the response.
 */

import { BetaFitRequest, BetaFitResponse } from "./api.js";

export interface BetaForm {
  lower: string;
  upper: string;
  knownShape: "p" | "q";
  knownValue: string;
  target: "mode" | "mean";
  targetValue: string;
}

export const defaultBetaForm: BetaForm = {
  lower: "10",
  upper: "100",
  knownShape: "p",
  knownValue: "1.1",
  target: "mode",
  targetValue: "18",
};

/** Translate the form into a fit request; throws on unparseable input. */
export function assembleFitRequest(form: BetaForm, samples = 121): BetaFitRequest {
  const parse = (label: string, text: string): number => {
    const value = Number(text);
    if (!Number.isFinite(value)) {
      throw new Error(`${label} must be a number, got "${text}"`);
    }
    return value;
  };
  const request: BetaFitRequest = {
    lower: parse("lower bound", form.lower),
    upper: parse("upper bound", form.upper),
    samples,
  };
  request[form.knownShape] = parse(`shape ${form.knownShape}`, form.knownValue);
  request[form.target] = parse(form.target, form.targetValue);
  return request;
}

/**
 * Map the service's (x, density) samples onto an SVG polyline path for a
 * width x height viewBox, y flipped so larger densities plot higher.
 */
export function densityPath(response: BetaFitResponse, width: number,
                            height: number): string {
  const pts = response.density;
  if (pts.length < 2) return "";
  const xs = pts.map(([x]) => x);
  const fs = pts.map(([, f]) => f);
  const xMin = xs[0];
  const xMax = xs[xs.length - 1];
  const fMax = Math.max(...fs);
  const scaleX = (x: number) =>
    xMax === xMin ? 0 : ((x - xMin) / (xMax - xMin)) * width;
  const scaleY = (f: number) =>
    fMax === 0 ? height : height - (f / fMax) * height;
  return pts
    .map(([x, f], i) => `${i === 0 ? "M" : "L"}${scaleX(x).toFixed(2)},${scaleY(f).toFixed(2)}`)
    .join(" ");
}
