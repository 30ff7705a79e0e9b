/**
 * Single-page wiring: tabs for assessment, uncertainty, and design &
 * results. Talks to the service exclusively through ApiClient; renders
 * whatever it returns.
 */

import { ApiClient, ApiErrorDetail, AttributeDoc, ComparisonDoc, EvaluationDoc } from "./api.js";
import { assembleFitRequest, BetaForm, defaultBetaForm, densityPath } from "./beta.js";
import { assembleFacts, defaultFactsForm, DESIGN_FIELDS, FactsForm, missingFields } from "./design.js";
import { clear, h } from "./dom.js";
import { buildLotteryViewModel } from "./lottery.js";
import { buildComparisonViewModel, buildRankingTable, ComparisonViewModel, RankingTable } from "./results.js";
import { SessionController, SessionState } from "./state.js";

const serviceBase =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8765";
const client = new ApiClient(serviceBase);
const controller = new SessionController(client);

let attributesText = "";
let betaForm: BetaForm = { ...defaultBetaForm };
let factsForm: FactsForm = { ...defaultFactsForm };
let selectedKb = "";
let selectedProfile = "";
let resultDoc: EvaluationDoc | null = null;
let comparisonDoc: ComparisonDoc | null = null;
let designError: ApiErrorDetail | null = null;

function errorBanner(detail: ApiErrorDetail | null, extra = ""): HTMLElement | null {
  if (!detail) return null;
  const bounds = detail.low !== undefined && detail.high !== undefined
    ? ` (admissible: ${detail.low} .. ${detail.high})` : "";
  const feasible = detail.feasible_low !== undefined && detail.feasible_high !== undefined
    ? ` (feasible: ${detail.feasible_low} .. ${detail.feasible_high})` : "";
  return h("div", { class: "banner error" },
           `${detail.code}: ${detail.message}${bounds}${feasible}${extra}`);
}

// --- assessment tab -------------------------------------------------------

function renderAssess(root: HTMLElement, state: SessionState): void {
  clear(root);
  if (state.phase === "idle") {
    root.append(
      h("p", {},
        "Paste the attribute list (JSON) the profile should cover, then start."),
      h("textarea", {
        id: "attributes-input", rows: "10",
        oninput: (e) => { attributesText = (e.target as HTMLTextAreaElement).value; },
      }, attributesText),
      h("div", { class: "row" },
        h("button", {
          id: "start-session",
          onclick: () => {
            void (async () => {
              try {
                const parsed = JSON.parse(attributesText);
                const attributes: AttributeDoc[] =
                  Array.isArray(parsed) ? parsed : parsed.attributes;
                await controller.start(attributes);
              } catch (err) {
                alert(`could not start: ${(err as Error).message}`);
              }
            })();
          },
        }, "Start assessment")));
    return;
  }

  if (state.conflict) {
    root.append(h("div", { class: "banner warn" },
                  "This question advanced elsewhere; showing the current one."));
  }
  if (state.error) {
    const banner = errorBanner(state.error, " — please answer again.");
    if (banner) root.append(banner);
  }

  if ((state.phase === "asking" || state.phase === "submitting") && state.question) {
    const vm = buildLotteryViewModel(state.question, state.answered, state.total);
    const value = h("input", {
      id: "answer-value", type: "number", step: "any",
      min: String(vm.control.min), max: String(vm.control.max),
    });
    const slider = h("input", {
      id: "answer-slider", type: "range",
      min: String(vm.control.min), max: String(vm.control.max), step: "any",
      oninput: (e) => {
        (value as HTMLInputElement).value = (e.target as HTMLInputElement).value;
      },
    });
    const sureCard = h("div", { class: "card selected" },
                       h("h3", {}, vm.sureThingTitle),
                       h("p", {}, vm.sureThingBody), slider, value);
    const lotteryCard = h("div", { class: "card" },
                          h("h3", {}, vm.lotteryTitle), h("p", {}, vm.lotteryBody));
    for (const card of [sureCard, lotteryCard]) {
      card.addEventListener("click", () => {
        sureCard.classList.toggle("selected", card === sureCard);
        lotteryCard.classList.toggle("selected", card === lotteryCard);
      });
    }
    root.append(
      h("h2", {}, vm.heading),
      h("p", { class: "progress" },
        `question ${vm.progress.answered + 1} of ${vm.progress.total}`),
      h("p", {}, vm.prompt),
      h("div", { class: "cards" }, sureCard, lotteryCard),
      h("button", {
        id: "submit-answer",
        disabled: state.phase === "submitting",
        onclick: () => {
          const raw = (value as HTMLInputElement).value;
          if (raw === "") return;
          void controller.answer(Number(raw));
        },
      }, state.phase === "submitting" ? "Submitting..." : "Submit answer"));
    return;
  }

  if (state.phase === "complete") {
    root.append(
      h("h2", {}, "All questions answered"),
      h("button", {
        id: "finalize-session",
        onclick: () => {
          void controller.finalize("browser session").then((resp) => {
            selectedProfile = resp.profile_id;
          });
        },
      }, "Build the profile"));
    return;
  }

  if (state.phase === "finalized" && state.finalized) {
    const profile = state.finalized.profile;
    const rows = profile.utilities.map((u, j) =>
      h("tr", {},
        h("td", {}, u.attribute),
        h("td", {}, String(u.risk_coefficient)),
        h("td", {}, String(profile.scaling_constants[j]))));
    root.append(
      h("h2", {}, "Profile ready"),
      h("p", {}, `stored as ${state.finalized.profile_id}`),
      h("p", { class: "fingerprint" },
        `fingerprint ${state.finalized.profile_fingerprint}`),
      h("table", { class: "grid" },
        h("thead", {}, h("tr", {},
                         h("th", {}, "attribute"),
                         h("th", {}, "risk coefficient"),
                         h("th", {}, "scaling constant"))),
        h("tbody", {}, ...rows)),
      h("p", {},
        `master constant: ${profile.master_constant ?? "additive"}`));
  }
}

// --- uncertainty tab ------------------------------------------------------

function renderBeta(root: HTMLElement, lastFit: import("./api.js").BetaFitResponse | null,
                    error: ApiErrorDetail | null): void {
  clear(root);
  const banner = errorBanner(error);
  if (banner) root.append(banner);
  const field = (label: string, input: HTMLElement) =>
    h("label", { class: "field" }, label, input);

  const lower = h("input", {
    value: betaForm.lower,
    oninput: (e) => { betaForm.lower = (e.target as HTMLInputElement).value; },
  });
  const upper = h("input", {
    value: betaForm.upper,
    oninput: (e) => { betaForm.upper = (e.target as HTMLInputElement).value; },
  });
  const knownShape = h("select", {
    onchange: (e) => {
      betaForm.knownShape = (e.target as HTMLSelectElement).value as "p" | "q";
    },
  }, h("option", { value: "p", selected: betaForm.knownShape === "p" }, "p"),
     h("option", { value: "q", selected: betaForm.knownShape === "q" }, "q"));
  const knownValue = h("input", {
    value: betaForm.knownValue,
    oninput: (e) => { betaForm.knownValue = (e.target as HTMLInputElement).value; },
  });
  const targetValue = h("input", {
    value: betaForm.targetValue,
    oninput: (e) => { betaForm.targetValue = (e.target as HTMLInputElement).value; },
  });

  const fit = (target: "mode" | "mean") => {
    betaForm.target = target;
    void (async () => {
      try {
        const response = await client.fitBeta(assembleFitRequest(betaForm));
        renderBeta(root, response, null);
      } catch (err) {
        if (err instanceof Error && "detail" in err) {
          renderBeta(root, null, (err as { detail: ApiErrorDetail }).detail);
        } else {
          alert((err as Error).message);
        }
      }
    })();
  };

  root.append(
    h("h2", {}, "Choose beta parameters"),
    h("div", { class: "beta-form" },
      field("Lower bound", lower),
      field("Upper bound", upper),
      field("Known shape", knownShape),
      field("Its value", knownValue),
      field(`Target ${betaForm.target}`, targetValue)),
    h("div", { class: "row" },
      h("button", { id: "fit-mode", onclick: () => fit("mode") },
        `Find ${betaForm.knownShape === "p" ? "q" : "p"} using mode`),
      h("button", { id: "fit-mean", onclick: () => fit("mean") },
        `Find ${betaForm.knownShape === "p" ? "q" : "p"} using mean`)));

  if (lastFit) {
    const svgNs = "http://www.w3.org/2000/svg";
    const svg = document.createElementNS(svgNs, "svg");
    svg.setAttribute("viewBox", "0 0 480 160");
    svg.setAttribute("class", "density");
    const path = document.createElementNS(svgNs, "path");
    path.setAttribute("d", densityPath(lastFit, 480, 150));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", "currentColor");
    svg.append(path);
    root.append(
      h("div", { class: "fit-result" },
        h("p", {}, `p = ${lastFit.beta.p}, q = ${lastFit.beta.q}`),
        h("p", {}, `mean = ${lastFit.mean}`),
        h("p", {}, `mode = ${lastFit.mode ?? "undefined (uniform)"}`)),
      svg);
  }
}

// --- design & results tab -------------------------------------------------

function renderDesign(root: HTMLElement): void {
  clear(root);
  const banner = errorBanner(designError);
  if (banner) root.append(banner);

  const form = h("div", { class: "facts-form" });
  for (const field of DESIGN_FIELDS) {
    let input: HTMLElement;
    if (field.kind === "enum") {
      input = h("select", {
        onchange: (e) => {
          factsForm[field.name] = (e.target as HTMLSelectElement).value;
          renderDesign(root);
        },
      }, ...(field.options ?? []).map((option) =>
        h("option", { value: option, selected: factsForm[field.name] === option },
          option)));
    } else if (field.kind === "bool") {
      input = h("input", {
        type: "checkbox", checked: factsForm[field.name] === true,
        onchange: (e) => {
          factsForm[field.name] = (e.target as HTMLInputElement).checked;
          renderDesign(root);
        },
      });
    } else {
      input = h("input", {
        value: String(factsForm[field.name] ?? ""),
        oninput: (e) => {
          factsForm[field.name] = (e.target as HTMLInputElement).value;
        },
      });
    }
    form.append(h("label", { class: "field" }, field.label, input));
  }

  const kbInput = h("input", {
    id: "kb-id", placeholder: "knowledge base id", value: selectedKb,
    oninput: (e) => { selectedKb = (e.target as HTMLInputElement).value; },
  });
  const profileInput = h("input", {
    id: "profile-id", placeholder: "profile id", value: selectedProfile,
    oninput: (e) => { selectedProfile = (e.target as HTMLInputElement).value; },
  });

  const gaps = missingFields(factsForm);
  const run = (mode: "integrated" | "compare") => {
    void (async () => {
      designError = null;
      try {
        const facts = assembleFacts(factsForm);
        const doc = await client.evaluate(selectedKb, facts, selectedProfile, mode);
        if (mode === "compare") {
          comparisonDoc = doc as ComparisonDoc;
          resultDoc = null;
        } else {
          resultDoc = doc as EvaluationDoc;
          comparisonDoc = null;
        }
      } catch (err) {
        if (err instanceof Error && "detail" in err) {
          designError = (err as { detail: ApiErrorDetail }).detail;
        } else {
          designError = { code: "client", message: (err as Error).message };
        }
      }
      renderDesign(root);
    })();
  };

  root.append(
    h("h2", {}, "Choose variable values"),
    form,
    h("div", { class: "row" }, kbInput, profileInput));
  if (gaps.length > 0) {
    root.append(h("p", { class: "hint" },
                  `complete these fields first: ${gaps.join(", ")}`));
  }
  root.append(
    h("div", { class: "row" },
      h("button", { id: "run-evaluate", disabled: gaps.length > 0, onclick: () => run("integrated") },
        "Evaluate"),
      h("button", { id: "run-compare", disabled: gaps.length > 0, onclick: () => run("compare") },
        "Compare modes")));

  if (comparisonDoc) {
    root.append(renderComparison(buildComparisonViewModel(comparisonDoc)));
  } else if (resultDoc) {
    root.append(renderRanking(buildRankingTable(resultDoc)));
  }
}

function renderRanking(table: RankingTable): HTMLElement {
  const head = h("tr", {},
                 ...table.slotColumns.map((slot) => h("th", {}, slot)),
                 ...table.attributeColumns.map((attr) => h("th", {}, `E[u ${attr}]`)),
                 h("th", {}, "E[U]"), h("th", {}, "rank"));
  const body = table.rows.map((row) =>
    h("tr", {},
      ...row.materials.map((material) => h("td", {}, material)),
      ...row.perAttribute.map((value) => h("td", {}, value)),
      h("td", {}, row.expectedUtility),
      h("td", {}, String(row.rank))));
  return h("div", { class: "results" },
           h("h3", {}, "Ranking"),
           table.errorCount > 0
             ? h("p", { class: "hint" },
                 `${table.errorCount} alternative(s) could not be scored`)
             : null,
           h("table", { class: "grid", id: "ranking-table" },
             h("thead", {}, head), h("tbody", {}, ...body)),
           h("p", { class: "hint" },
             `fired rules: ${table.firedRules.join(", ") || "none"}`));
}

function renderComparison(vm: ComparisonViewModel): HTMLElement {
  const rows = vm.rows.map((row) =>
    h("tr", { class: row.agrees ? "agree" : "differ" },
      h("td", {}, row.slot),
      h("td", {}, row.conventional),
      h("td", {}, row.integrated),
      h("td", {}, row.agrees ? "same" : "differs")));
  return h("div", { class: "results" },
           h("h3", {}, "Conventional vs integrated"),
           h("table", { class: "grid", id: "comparison-table" },
             h("thead", {},
               h("tr", {},
                 h("th", {}, "component"),
                 h("th", {}, `conventional (E[U] ${vm.conventionalUtility})`),
                 h("th", {}, `integrated (E[U] ${vm.integratedUtility})`),
                 h("th", {}, "agreement"))),
             h("tbody", {}, ...rows)),
           h("p", { class: vm.picksMatch ? "hint" : "banner warn" }, vm.verdict),
           vm.ranking ? renderRanking(vm.ranking) : null);
}

// --- boot -----------------------------------------------------------------

function boot(): void {
  const tabs = h("nav", {},
                 h("button", { id: "tab-assess", class: "tab active" }, "Assess preferences"),
                 h("button", { id: "tab-beta", class: "tab" }, "Uncertainty"),
                 h("button", { id: "tab-design", class: "tab" }, "Design & results"));
  const assessRoot = h("section", { id: "screen-assess" });
  const betaRoot = h("section", { id: "screen-beta", class: "hidden" });
  const designRoot = h("section", { id: "screen-design", class: "hidden" });

  const sections: Record<string, HTMLElement> = {
    "tab-assess": assessRoot, "tab-beta": betaRoot, "tab-design": designRoot,
  };
  tabs.querySelectorAll("button").forEach((button) => {
    button.addEventListener("click", () => {
      tabs.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
      button.classList.add("active");
      for (const [id, section] of Object.entries(sections)) {
        section.classList.toggle("hidden", id !== button.id);
      }
    });
  });

  document.body.append(
    h("header", {},
      h("h1", {}, "Design evaluation under uncertainty"),
      h("p", { class: "hint" }, `service: ${serviceBase}`)),
    tabs, assessRoot, betaRoot, designRoot);

  controller.subscribe((state) => renderAssess(assessRoot, state));
  renderBeta(betaRoot, null, null);
  renderDesign(designRoot);
}

if (typeof document !== "undefined" && typeof location !== "undefined") {
  boot();
}
