/**
 * Browser entry point: load assigned instances, render the reading pane
 * and the slot form, copy clicked spans verbatim into the focused slot,
 * submit with live validation, surface conflicts, advance on success.
 */

import { ApiClient } from "./api.js";
import {
  SlotFormState,
  applyServerViolations,
  emptyForm,
  formFromFrame,
  setAnchor,
  setImplicit,
  setOrientation,
  setRank,
  setSlotFreeText,
  setSlotFromSpan,
  submitEnabled,
  toFramePayload,
} from "./formState.js";
import {
  renderAnchorPicker,
  renderConflictBanner,
  renderIaaTable,
  renderInstance,
  renderSlotViolations,
  renderSubmitButton,
  renderViolations,
} from "./render.js";
import type { InstancePayload } from "./types.js";

type TextSlot = "target" | "cs" | "property" | "amount";

class AnnotatorApp {
  private client: ApiClient;
  private queue: InstancePayload[] = [];
  private current: InstancePayload | null = null;
  private form: SlotFormState = emptyForm();
  private focusedSlot: TextSlot = "target";

  constructor(private root: HTMLElement, baseUrl: string, annotator: string) {
    this.client = new ApiClient(baseUrl, annotator);
  }

  async start(): Promise<void> {
    this.queue = await this.client.getCandidates();
    const next = this.queue.find((inst) => inst.annotation.status === "unseen");
    await this.show(next ?? this.queue[0] ?? null);
  }

  private async show(instance: InstancePayload | null): Promise<void> {
    this.current = instance;
    if (instance === null) {
      this.root.innerHTML = `<p class="done">No instances assigned.</p>`;
      return;
    }
    this.form =
      instance.annotation.frame !== null
        ? formFromFrame(instance.annotation.frame)
        : emptyForm();
    this.mount();
  }

  private mount(): void {
    if (this.current === null) return;
    const inst = this.current;
    this.root.innerHTML = [
      renderInstance(inst),
      `<div class="form">`,
      this.slotRow("target", "Target"),
      this.slotRow("cs", "Comparison set"),
      `<div class="row"><label>Anchor</label>${renderAnchorPicker(this.form)}${renderSlotViolations(this.form, "anchor")}</div>`,
      this.slotRow("property", "Property"),
      `<div class="row"><label>Orientation</label>`,
      `<select id="orientation"><option value="positive"${this.form.orientation === "positive" ? " selected" : ""}>positive (max)</option>`,
      `<option value="negative"${this.form.orientation === "negative" ? " selected" : ""}>negative (min)</option></select>`,
      renderSlotViolations(this.form, "orientation"),
      `</div>`,
      `<div class="row"><label>Rank</label><input id="rank" type="number" min="1" value="${this.form.rank}">${renderSlotViolations(this.form, "rank")}</div>`,
      `<div class="row"><label>Implicit</label><input id="implicit" type="checkbox"${this.form.implicit ? " checked" : ""}></div>`,
      this.slotRow("amount", "Amount (optional)"),
      renderViolations(this.form.violations.filter((v) => v.field === "frame")),
      `<div class="actions">${renderSubmitButton(this.form)}`,
      `<button id="mark-nonsup">Mark ¬Sup</button>`,
      `<button id="skip">Skip</button></div>`,
      `</div>`,
      `<div id="banner"></div>`,
    ].join("\n");
    this.wire();
  }

  private slotRow(slot: TextSlot, label: string): string {
    const value = slot === "amount" ? this.form.amount?.text ?? "" : this.form[slot].text;
    const source = slot === "amount" ? this.form.amount?.source : this.form[slot].source;
    const badge = value
      ? `<span class="badge source-${source}">${source === "span" ? "from text" : "free text"}</span>`
      : "";
    return [
      `<div class="row" data-slot="${slot}">`,
      `<label for="${slot}">${label}</label>`,
      `<input id="${slot}" type="text" value="${value.replace(/"/g, "&quot;")}" data-slot-input="${slot}">`,
      badge,
      renderSlotViolations(this.form, slot),
      `</div>`,
    ].join("");
  }

  private wire(): void {
    this.root.querySelectorAll<HTMLInputElement>("input[data-slot-input]").forEach((input) => {
      const slot = input.dataset.slotInput as TextSlot;
      input.addEventListener("focus", () => {
        this.focusedSlot = slot;
      });
      input.addEventListener("input", () => {
        this.form = setSlotFreeText(this.form, slot, input.value);
        this.refreshControls();
      });
    });
    this.root.querySelectorAll<HTMLElement>(".w").forEach((span) => {
      span.addEventListener("click", () => {
        if (this.current === null) return;
        const start = Number(span.dataset.start);
        const end = Number(span.dataset.end);
        const exact = this.current.doc_text.slice(start, end);
        const existing =
          this.focusedSlot === "amount" ? this.form.amount?.text ?? "" : this.form[this.focusedSlot].text;
        const appended = existing && this.extendsSelection(existing, start) ? `${existing} ${exact}` : exact;
        this.form = setSlotFromSpan(this.form, this.focusedSlot, appended);
        this.mount();
      });
    });
    this.on("anchor", "change", (el: HTMLSelectElement) => {
      const [index, role] = el.value.split(":");
      this.form = setAnchor(this.form, Number(index), role === "" ? null : role);
      this.refreshControls();
    });
    this.on("orientation", "change", (el: HTMLSelectElement) => {
      this.form = setOrientation(this.form, el.value as "positive" | "negative");
      this.refreshControls();
    });
    this.on("rank", "input", (el: HTMLInputElement) => {
      this.form = setRank(this.form, Number(el.value));
      this.refreshControls();
    });
    this.on("implicit", "change", (el: HTMLInputElement) => {
      this.form = setImplicit(this.form, el.checked);
    });
    this.on("submit", "click", () => void this.submit());
    this.on("mark-nonsup", "click", () => void this.markNonSuperlative());
    this.on("skip", "click", () => void this.skip());
  }

  /** Clicking further words extends the slot value; clicking elsewhere
   * restarts it. Heuristic only; the value always stays verbatim text. */
  private extendsSelection(existing: string, _start: number): boolean {
    return existing.length > 0 && this.focusedSlot !== "property";
  }

  private on<T extends HTMLElement>(id: string, event: string, handler: (el: T) => void): void {
    const el = this.root.querySelector<T>(`#${id}`);
    if (el) el.addEventListener(event, () => handler(el));
  }

  private refreshControls(): void {
    const submit = this.root.querySelector<HTMLButtonElement>("#submit");
    if (submit) submit.disabled = !submitEnabled(this.form);
    const picker = this.root.querySelector("#anchor");
    if (picker) picker.outerHTML = renderAnchorPicker(this.form);
  }

  private async submit(): Promise<void> {
    if (this.current === null || !submitEnabled(this.form)) return;
    const override = this.root.querySelector<HTMLInputElement>("#override")?.checked ?? false;
    this.form = { ...this.form, pendingValidation: true };
    this.refreshControls();
    const result = await this.client.submitFrame(
      this.current.id,
      this.current.annotation.revision,
      toFramePayload(this.form),
      override,
    );
    if (result.kind === "rejected") {
      this.form = applyServerViolations(
        this.form,
        result.body.violations,
        result.body.override_allowed ?? false,
      );
      this.mount();
      return;
    }
    if (result.kind === "conflict") {
      this.form = { ...this.form, pendingValidation: false };
      const banner = this.root.querySelector("#banner");
      if (banner) {
        banner.innerHTML = renderConflictBanner(result.body.current_revision);
        this.on("reload", "click", () => void this.reload());
      }
      return;
    }
    await this.advance();
  }

  private async markNonSuperlative(): Promise<void> {
    if (this.current === null) return;
    const result = await this.client.markNonSuperlative(
      this.current.id,
      this.current.annotation.revision,
    );
    if (result.kind === "conflict") {
      const banner = this.root.querySelector("#banner");
      if (banner) {
        banner.innerHTML = renderConflictBanner(result.body.current_revision);
        this.on("reload", "click", () => void this.reload());
      }
      return;
    }
    await this.advance();
  }

  private async skip(): Promise<void> {
    if (this.current === null) return;
    await this.client.skip(this.current.id);
    await this.advance();
  }

  private async reload(): Promise<void> {
    if (this.current === null) return;
    await this.show(await this.client.getInstance(this.current.id));
  }

  private async advance(): Promise<void> {
    this.queue = await this.client.getCandidates();
    const next = this.queue.find((inst) => inst.annotation.status === "unseen");
    await this.show(next ?? null);
  }
}

export async function mountIaaView(root: HTMLElement, baseUrl: string, a: string, b: string, sample?: number): Promise<void> {
  const client = new ApiClient(baseUrl, a);
  const payload = await client.getIaa(a, b, sample);
  root.innerHTML = renderIaaTable(payload);
}

export function mountAnnotator(root: HTMLElement, baseUrl: string, annotator: string): AnnotatorApp {
  const app = new AnnotatorApp(root, baseUrl, annotator);
  void app.start();
  return app;
}

declare global {
  interface Window {
    supframesAnnotator: typeof mountAnnotator;
    supframesIaa: typeof mountIaaView;
  }
}

if (typeof window !== "undefined") {
  window.supframesAnnotator = mountAnnotator;
  window.supframesIaa = mountIaaView;
}
