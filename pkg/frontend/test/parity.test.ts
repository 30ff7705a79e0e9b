/**
 * End-to-end parity against the real service: answering the bundled
 * scripts through the session controller (the exact code path the lottery
 * screens call) must produce the same profile fingerprint as the
 * command-line `assess` on the same script, and the comparison view must
 * show the bundled truck pattern (fascia and absorber flip for the
 * near-neutral designer, the beam stays).
 */

import assert from "node:assert/strict";
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { after, before, test } from "node:test";
import { fileURLToPath } from "node:url";

import { ApiClient, ComparisonDoc } from "../src/api.js";
import { buildComparisonViewModel } from "../src/results.js";
import { SessionController } from "../src/state.js";

const here = fileURLToPath(new URL(".", import.meta.url));
const repoRoot = resolve(here, "..", "..", "..");
const fixtures = join(repoRoot, "src", "maud", "fixtures");

const kbDoc = JSON.parse(readFileSync(join(fixtures, "bumper_kb.json"), "utf-8"));
const truckFacts = JSON.parse(readFileSync(join(fixtures, "truck_facts.json"), "utf-8"));
const typicalScript = JSON.parse(readFileSync(join(fixtures, "answers_typical.json"), "utf-8"));
const atypicalScript = JSON.parse(readFileSync(join(fixtures, "answers_atypical.json"), "utf-8"));

let service: ReturnType<typeof spawn>;
let client: ApiClient;
let workDir: string;

before(async () => {
  workDir = mkdtempSync(join(tmpdir(), "maud-ui-test-"));
  service = spawn("python3", ["-m", "maud.cli", "serve",
                              "--addr", "127.0.0.1:0",
                              "--data-dir", join(workDir, "data")],
                  { env: { ...process.env, PYTHONUNBUFFERED: "1" },
                    stdio: ["ignore", "pipe", "inherit"] });
  const base = await new Promise<string>((resolvePort, reject) => {
    const timer = setTimeout(
      () => reject(new Error("service did not start in time")), 20_000);
    let buffered = "";
    service.stdout!.on("data", (chunk: Buffer) => {
      buffered += chunk.toString("utf-8");
      const match = buffered.match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (match) {
        clearTimeout(timer);
        resolvePort(match[1]);
      }
    });
    service.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early with ${code}`));
    });
  });
  client = new ApiClient(base);
});

after(() => {
  service.kill();
});

async function fingerprintThroughUi(script: { answers: { answer: number }[] }):
    Promise<{ fingerprint: string; profileId: string }> {
  const controller = new SessionController(client);
  await controller.start(kbDoc.attributes);
  await controller.runScript(script.answers.map((a) => a.answer));
  assert.equal(controller.current.phase, "complete");
  const finalized = await controller.finalize("ui parity");
  return { fingerprint: finalized.profile_fingerprint,
           profileId: finalized.profile_id };
}

function fingerprintThroughCli(script: unknown): string {
  const attrsPath = join(workDir, "attrs.json");
  const scriptPath = join(workDir, "script.json");
  const outPath = join(workDir, "profile.json");
  writeFileSync(attrsPath, JSON.stringify({ attributes: kbDoc.attributes }));
  writeFileSync(scriptPath, JSON.stringify(script));
  const run = spawnSync("python3", ["-m", "maud.cli", "assess",
                                    "--attributes", attrsPath,
                                    "--answers", scriptPath,
                                    "--out", outPath],
                        { encoding: "utf-8" });
  assert.equal(run.status, 0, run.stderr);
  return JSON.parse(readFileSync(outPath, "utf-8")).fingerprint;
}

test("lottery screens and the CLI produce identical profile fingerprints", async () => {
  for (const script of [typicalScript, atypicalScript]) {
    const ui = await fingerprintThroughUi(script);
    const cli = fingerprintThroughCli(script);
    assert.equal(ui.fingerprint, cli);
  }
});

test("comparison view renders the bundled truck pattern", async () => {
  const { profileId } = await fingerprintThroughUi(atypicalScript);
  const stored = await client.storeKb(kbDoc);
  const doc = await client.evaluate(
    stored.kb_id, truckFacts, profileId, "compare") as ComparisonDoc;
  const vm = buildComparisonViewModel(doc);

  const bySlot = Object.fromEntries(vm.rows.map((row) => [row.slot, row]));
  assert.equal(bySlot.fascia.conventional, "none");
  assert.equal(bySlot.fascia.integrated, "thermoset");
  assert.equal(bySlot.fascia.agrees, false);
  assert.equal(bySlot.energy_absorber.conventional, "none");
  assert.equal(bySlot.energy_absorber.integrated, "foam");
  assert.equal(bySlot.energy_absorber.agrees, false);
  assert.equal(bySlot.beam.conventional, "stamped_steel");
  assert.equal(bySlot.beam.integrated, "stamped_steel");
  assert.equal(bySlot.beam.agrees, true);
  assert.equal(vm.picksMatch, false);
  assert.ok(doc.integrated.expected_utility > doc.conventional.expected_utility);
  assert.ok(vm.ranking && vm.ranking.rows.length > 0);
});

test("a typical profile shows matching picks", async () => {
  const { profileId } = await fingerprintThroughUi(typicalScript);
  const stored = await client.storeKb(kbDoc);
  const doc = await client.evaluate(
    stored.kb_id, truckFacts, profileId, "compare") as ComparisonDoc;
  const vm = buildComparisonViewModel(doc);
  assert.equal(vm.picksMatch, true);
  assert.equal(vm.rows.every((row) => row.agrees), true);
});
