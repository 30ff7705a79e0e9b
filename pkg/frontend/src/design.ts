/**
 * Design-input menu: the field catalogue the form renders, and assembly
 * of a facts document from form values. Validation proper happens
 * server-side; this module only parses numeric text fields.
 */

export type FieldKind = "enum" | "bool" | "number";

export interface DesignField {
  name: string;
  label: string;
  kind: FieldKind;
  options?: readonly string[];
}

export const DESIGN_FIELDS: readonly DesignField[] = [
  { name: "vehicle_type", label: "Vehicle type", kind: "enum",
    options: ["sedan", "subcompact", "sport", "pickup_truck"] },
  { name: "desired_finish", label: "Desired finish", kind: "enum",
    options: ["bright", "neutral_color", "match_body_color", "unknown"] },
  { name: "bumper_shape", label: "Bumper shape", kind: "enum",
    options: ["flat", "peaked", "curved"] },
  { name: "cutouts_present", label: "Cutouts present?", kind: "bool" },
  { name: "highest_allowed_offset", label: "Highest allowed offset", kind: "enum",
    options: ["large", "medium", "small"] },
  { name: "cost_range", label: "Cost range", kind: "enum",
    options: ["high", "medium", "low"] },
  { name: "impact_rating", label: "Impact rating", kind: "enum",
    options: ["over_5mph", "5mph", "2.5mph", "no_standard"] },
  { name: "curb_weight_lbs", label: "Curb weight (lbs)", kind: "number" },
  { name: "production_volume_thousands", label: "Production volume (x1000)",
    kind: "number" },
  { name: "run_years", label: "Length of run (years)", kind: "number" },
  { name: "lead_time_years", label: "Lead time required (years)", kind: "number" },
];

export type FactsForm = Record<string, string | boolean>;

export const defaultFactsForm: FactsForm = {
  vehicle_type: "pickup_truck",
  desired_finish: "neutral_color",
  bumper_shape: "flat",
  cutouts_present: false,
  highest_allowed_offset: "large",
  cost_range: "low",
  impact_rating: "no_standard",
  curb_weight_lbs: "4300",
  production_volume_thousands: "150",
  run_years: "8",
  lead_time_years: "2",
};

/** Names of fields that are empty or unparseable; a complete form returns []. */
export function missingFields(form: FactsForm): string[] {
  const missing: string[] = [];
  for (const field of DESIGN_FIELDS) {
    const value = form[field.name];
    if (field.kind === "bool") {
      if (typeof value !== "boolean") missing.push(field.name);
    } else if (field.kind === "number") {
      if (typeof value !== "string" || value.trim() === "" ||
          !Number.isFinite(Number(value))) {
        missing.push(field.name);
      }
    } else if (typeof value !== "string" || value === "") {
      missing.push(field.name);
    }
  }
  return missing;
}

export function assembleFacts(form: FactsForm): Record<string, unknown> {
  const gaps = missingFields(form);
  if (gaps.length > 0) {
    throw new Error(`incomplete design inputs: ${gaps.join(", ")}`);
  }
  const facts: Record<string, unknown> = {};
  for (const field of DESIGN_FIELDS) {
    const value = form[field.name];
    facts[field.name] =
      field.kind === "number" ? Number(value as string) : value;
  }
  return facts;
}
