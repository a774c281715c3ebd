import { describe, expect, it } from "vitest";

import { applyServerViolations, emptyForm, setSlotFromSpan } from "../src/formState.js";
import {
  escapeHtml,
  renderAnchorPicker,
  renderIaaTable,
  renderInstance,
  renderViolations,
  wordSpans,
} from "../src/render.js";
import type { InstancePayload } from "../src/types.js";

const DOC = "People pay with Visa cards in Romania. The most popular card is Visa Gold.";

const INSTANCE: InstancePayload = {
  id: "v1:1:43",
  doc_id: "v1",
  domain: "Wikipedia",
  doc_text: DOC,
  sentence_span: [39, 75],
  trigger_span: [43, 47],
  trigger: "most",
  kind: "adverbial",
  filtered: false,
  reason: null,
  context: { start: 0, end: 75, text: DOC },
  annotation: { status: "unseen", revision: 0, is_superlative: null, frame: null },
};

describe("renderInstance", () => {
  it("highlights the trigger inside its sentence", () => {
    const html = renderInstance(INSTANCE);
    expect(html).toContain('<mark class="trigger">most</mark>');
    expect(html).toContain('data-start="16" data-end="20">Visa</span>');
    expect(html).toContain('class="context before"');
  });

  it("escapes markup in document text", () => {
    const html = renderInstance({
      ...INSTANCE,
      doc_text: DOC.replace("Visa Gold.", "<b>Visa</b>."),
      context: { start: 0, end: 73, text: DOC.replace("Visa Gold.", "<b>Visa</b>.") },
    });
    expect(html).not.toContain("<b>Visa</b>");
    expect(html).toContain("&lt;b&gt;");
  });

  it("shows the filter badge for marked candidates", () => {
    const html = renderInstance({ ...INSTANCE, filtered: true, reason: "proportional-quantifier" });
    expect(html).toContain("filtered: proportional-quantifier");
  });
});

describe("wordSpans", () => {
  it("carries absolute document offsets for click-to-fill", () => {
    const html = wordSpans("Visa cards", 16);
    expect(html).toContain('data-start="16" data-end="20"');
    expect(html).toContain('data-start="21" data-end="26"');
  });

  it("round-trips offsets against the document", () => {
    const html = wordSpans(DOC.slice(39, 75), 39);
    for (const match of html.matchAll(/data-start="(\d+)" data-end="(\d+)">([^<]+)</g)) {
      expect(DOC.slice(Number(match[1]), Number(match[2]))).toBe(match[3]);
    }
  });
});

describe("renderViolations", () => {
  it("prints the violation strings verbatim", () => {
    const html = renderViolations([
      { severity: "error", field: "rank", message: "rank must be ≥ 1" },
    ]);
    expect(html).toContain("rank must be ≥ 1");
    expect(html).toContain('class="violation error"');
  });

  it("renders nothing when the list is empty", () => {
    expect(renderViolations([])).toBe("");
  });
});

describe("renderAnchorPicker", () => {
  it("lists CS argument positions", () => {
    const form = setSlotFromSpan(emptyForm(), "cs", INSTANCE.doc_text.length ? "PAY(e, AGENT=people, ASSET=Visa cards)" : "");
    const html = renderAnchorPicker(form);
    expect(html).toContain("#1=AGENT");
    expect(html).toContain("#2=ASSET");
  });

  it("is disabled until the CS parses", () => {
    const form = applyServerViolations(emptyForm(), [], false);
    expect(renderAnchorPicker(form)).toContain("disabled");
  });
});

describe("renderIaaTable", () => {
  it("formats accuracies and kappas", () => {
    const html = renderIaaTable({
      n_overlap: 10,
      rows: [
        { name: "exact orientation", support: 10, accuracy: 0.9, kappa: 0.78 },
        { name: "event predicate", support: 0, accuracy: null, kappa: null },
      ],
    });
    expect(html).toContain("exact orientation");
    expect(html).toContain("0.90 (0.78)");
    expect(html).toContain("10 overlapping instances");
  });
});
