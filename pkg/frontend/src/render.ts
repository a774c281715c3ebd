/**
 * Pure HTML-string renderers; app.ts mounts them and wires events.
 * Keeping these as functions of (payload, state) makes the view logic
 * testable without a DOM.
 */

import type { IaaPayload, InstancePayload, Violation } from "./types.js";
import type { SlotFormState } from "./formState.js";
import { anchorOptions, submitEnabled, violationsForSlot } from "./formState.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/**
 * The reading pane: context before the sentence, the sentence with the
 * trigger highlighted, context after. Every text node is wrapped in
 * word spans carrying document offsets so clicks can copy exact spans.
 */
export function renderInstance(payload: InstancePayload): string {
  const text = payload.doc_text;
  const [s0, s1] = payload.sentence_span;
  const [t0, t1] = payload.trigger_span;
  const ctx = payload.context;
  const before = text.slice(ctx.start, s0);
  const sentencePre = text.slice(s0, t0);
  const trigger = text.slice(t0, t1);
  const sentencePost = text.slice(t1, s1);
  const after = text.slice(s1, ctx.end);
  const filteredBadge = payload.filtered
    ? `<span class="badge filtered" title="${escapeHtml(payload.reason ?? "")}">filtered: ${escapeHtml(payload.reason ?? "")}</span>`
    : "";
  return [
    `<div class="instance" data-instance="${escapeHtml(payload.id)}">`,
    `<div class="meta">${escapeHtml(payload.domain)} · ${escapeHtml(payload.doc_id)} ${filteredBadge}</div>`,
    `<div class="context before">${wordSpans(before, ctx.start)}</div>`,
    `<div class="sentence">${wordSpans(sentencePre, s0)}<mark class="trigger">${escapeHtml(trigger)}</mark>${wordSpans(sentencePost, t1)}</div>`,
    `<div class="context after">${wordSpans(after, s1)}</div>`,
    `</div>`,
  ].join("\n");
}

/** Wrap each word in a clickable span with its absolute offsets. */
export function wordSpans(text: string, offset: number): string {
  const out: string[] = [];
  const pattern = /\S+/g;
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    const start = match.index ?? 0;
    out.push(escapeHtml(text.slice(last, start)));
    out.push(
      `<span class="w" data-start="${offset + start}" data-end="${offset + start + match[0].length}">${escapeHtml(match[0])}</span>`,
    );
    last = start + match[0].length;
  }
  out.push(escapeHtml(text.slice(last)));
  return out.join("");
}

export function renderViolations(violations: Violation[]): string {
  if (violations.length === 0) return "";
  const items = violations
    .map(
      (v) =>
        `<li class="violation ${v.severity}"><span class="field">${escapeHtml(v.field)}</span> ${escapeHtml(v.message)}</li>`,
    )
    .join("");
  return `<ul class="violations">${items}</ul>`;
}

export function renderSlotViolations(form: SlotFormState, slot: string): string {
  return renderViolations(violationsForSlot(form, slot));
}

export function renderAnchorPicker(form: SlotFormState): string {
  const options = anchorOptions(form);
  if (options.length === 0) {
    return `<select id="anchor" disabled><option>fill the CS first</option></select>`;
  }
  const selected = form.anchor;
  const rendered = options
    .map((option) => {
      const isSelected =
        selected !== null && selected.index === option.index && selected.role === option.role;
      return `<option value="${option.index}:${option.role ?? ""}"${isSelected ? " selected" : ""}>${escapeHtml(option.label)}</option>`;
    })
    .join("");
  return `<select id="anchor">${rendered}</select>`;
}

export function renderSubmitButton(form: SlotFormState): string {
  const disabled = submitEnabled(form) ? "" : " disabled";
  const override =
    form.overrideAllowed && form.violations.some((v) => v.severity === "warning")
      ? `<label class="override"><input type="checkbox" id="override"> resubmit overriding warnings</label>`
      : "";
  return `<button id="submit"${disabled}>Save frame</button>${override}`;
}

export function renderConflictBanner(currentRevision: number): string {
  return `<div class="banner conflict">Someone saved revision ${currentRevision} after you loaded this instance. <button id="reload">Reload</button></div>`;
}

export function renderIaaTable(payload: IaaPayload): string {
  const rows = payload.rows
    .map((row) => {
      const acc = row.accuracy === null ? "–" : row.accuracy.toFixed(2);
      const kappa = row.kappa === null ? "" : ` (${row.kappa.toFixed(2)})`;
      return `<tr><td>${escapeHtml(row.name)}</td><td>${row.support}</td><td>${acc}${kappa}</td></tr>`;
    })
    .join("");
  return [
    `<table class="iaa"><thead><tr><th>category</th><th>n</th><th>agreement</th></tr></thead>`,
    `<tbody>${rows}</tbody></table>`,
    `<p class="iaa-note">${payload.n_overlap} overlapping instances</p>`,
  ].join("\n");
}
