/**
 * Form state for the eight frame slots.
 *
 * Every text value tracks its provenance: "span" when copied verbatim
 * from the document by clicking, "free" when typed. The form never
 * invents text on its own. Submission is blocked while the last server
 * response contains an unresolved error violation.
 */

import { anchorChoices } from "./notation.js";
import type { AnchorPayload, FramePayload, Violation } from "./types.js";

export type ValueSource = "span" | "free";

export interface SlotValue {
  text: string;
  source: ValueSource;
}

export interface SlotFormState {
  target: SlotValue;
  cs: SlotValue;
  anchor: AnchorPayload | null;
  property: SlotValue;
  orientation: "positive" | "negative";
  rank: number;
  implicit: boolean;
  amount: SlotValue | null;
  pendingValidation: boolean;
  violations: Violation[];
  overrideAllowed: boolean;
}

export function emptyForm(): SlotFormState {
  return {
    target: { text: "", source: "free" },
    cs: { text: "", source: "free" },
    anchor: null,
    property: { text: "", source: "free" },
    orientation: "positive",
    rank: 1,
    implicit: false,
    amount: null,
    pendingValidation: false,
    violations: [],
    overrideAllowed: false,
  };
}

/** Rebuild form state from a stored frame, e.g. when revisiting an
 * instance; stored text counts as span-sourced (it was accepted before). */
export function formFromFrame(frame: FramePayload): SlotFormState {
  const form = emptyForm();
  form.target = { text: frame.target, source: "span" };
  form.cs = { text: frame.cs, source: "span" };
  form.anchor = { ...frame.anchor };
  form.property = { text: frame.property, source: "span" };
  form.orientation = frame.orientation;
  form.rank = frame.rank;
  form.implicit = frame.implicit;
  form.amount = frame.amount === null ? null : { text: frame.amount, source: "span" };
  return form;
}

export function setSlotFromSpan(form: SlotFormState, slot: "target" | "cs" | "property" | "amount", spanText: string): SlotFormState {
  const value: SlotValue = { text: spanText, source: "span" };
  const next = { ...form };
  if (slot === "amount") next.amount = value;
  else next[slot] = value;
  return clearStaleViolations(next, slot);
}

export function setSlotFreeText(form: SlotFormState, slot: "target" | "cs" | "property" | "amount", text: string): SlotFormState {
  const value: SlotValue = { text, source: "free" };
  const next = { ...form };
  if (slot === "amount") next.amount = text === "" ? null : value;
  else next[slot] = value;
  return clearStaleViolations(next, slot);
}

export function setAnchor(form: SlotFormState, index: number, role: string | null): SlotFormState {
  return clearStaleViolations({ ...form, anchor: { index, role } }, "anchor");
}

export function setRank(form: SlotFormState, rank: number): SlotFormState {
  return clearStaleViolations({ ...form, rank }, "rank");
}

export function setOrientation(form: SlotFormState, orientation: "positive" | "negative"): SlotFormState {
  return clearStaleViolations({ ...form, orientation }, "orientation");
}

export function setImplicit(form: SlotFormState, implicit: boolean): SlotFormState {
  return clearStaleViolations({ ...form, implicit }, "implicit");
}

/** Editing a slot clears that slot's reported violations; the server
 * remains the authority on the next submit. */
function clearStaleViolations(form: SlotFormState, slot: string): SlotFormState {
  return {
    ...form,
    violations: form.violations.filter((v) => v.field !== slot && !(slot === "cs" && v.field === "frame")),
  };
}

export function applyServerViolations(form: SlotFormState, violations: Violation[], overrideAllowed: boolean): SlotFormState {
  return { ...form, violations, overrideAllowed, pendingValidation: false };
}

export function violationsForSlot(form: SlotFormState, slot: string): Violation[] {
  return form.violations.filter((v) => v.field === slot);
}

export function hasBlockingErrors(form: SlotFormState): boolean {
  return form.violations.some((v) => v.severity === "error");
}

export function requiredSlotsFilled(form: SlotFormState): boolean {
  return (
    form.target.text.trim() !== "" &&
    form.cs.text.trim() !== "" &&
    form.property.text.trim() !== "" &&
    form.anchor !== null
  );
}

/** Submit is available once required slots are filled, no unresolved
 * error violations remain, and no request is in flight. */
export function submitEnabled(form: SlotFormState): boolean {
  return requiredSlotsFilled(form) && !hasBlockingErrors(form) && !form.pendingValidation;
}

export function anchorOptions(form: SlotFormState): Array<{ index: number; role: string | null; label: string }> {
  return anchorChoices(form.cs.text);
}

export function toFramePayload(form: SlotFormState): FramePayload {
  if (form.anchor === null) throw new Error("anchor not chosen");
  return {
    target: form.target.text,
    cs: form.cs.text,
    anchor: { ...form.anchor },
    property: form.property.text,
    orientation: form.orientation,
    rank: form.rank,
    implicit: form.implicit,
    amount: form.amount === null ? null : form.amount.text,
  };
}
