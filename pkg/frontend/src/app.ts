/**
 * DOM shell: wires the session controller to the page. Rendering only;
 * every string shown comes from the server untouched.
 */

import { ApiClient } from "./api.js";
import { SessionController, SessionView } from "./controller.js";

const client = new ApiClient("");
const controller = new SessionController(client, render);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const transcriptEl = el<HTMLDivElement>("transcript");
const slotsEl = el<HTMLTableSectionElement>("slots-body");
const fsmEl = el<HTMLSpanElement>("fsm-state");
const bannerEl = el<HTMLDivElement>("banner");
const inputEl = el<HTMLInputElement>("user-input");
const sendBtn = el<HTMLButtonElement>("send");
const silenceBtn = el<HTMLButtonElement>("silence");
const restartBtn = el<HTMLButtonElement>("restart");
const retryBtn = el<HTMLButtonElement>("retry");

function render(view: SessionView): void {
  transcriptEl.replaceChildren(
    ...view.transcript.map((entry) => {
      const bubble = document.createElement("div");
      bubble.className = `bubble ${entry.speaker}`;
      const text = document.createElement("p");
      text.textContent = entry.text;
      bubble.appendChild(text);
      if (entry.speaker === "agent" && entry.justification) {
        const details = document.createElement("details");
        const summary = document.createElement("summary");
        summary.textContent = "why";
        const pre = document.createElement("pre");
        pre.textContent = entry.justification;
        details.append(summary, pre);
        bubble.appendChild(details);
      }
      return bubble;
    }),
  );
  transcriptEl.scrollTop = transcriptEl.scrollHeight;

  slotsEl.replaceChildren(
    ...Object.entries(view.slots).map(([name, value]) => {
      const row = document.createElement("tr");
      const key = document.createElement("td");
      key.textContent = name;
      const val = document.createElement("td");
      val.textContent = value ?? "—";
      val.className = value ? "filled" : "empty";
      row.append(key, val);
      return row;
    }),
  );
  fsmEl.textContent = view.fsmState;

  bannerEl.hidden = view.error === null;
  bannerEl.querySelector("span")!.textContent = view.error ?? "";

  const disabled = view.busy || view.sessionId === null;
  inputEl.disabled = disabled;
  silenceBtn.disabled = disabled;
  sendBtn.disabled = disabled || inputEl.value.trim().length === 0;
}

async function sendFromInput(): Promise<void> {
  const text = inputEl.value.trim();
  if (!controller.canSend(text)) return;
  inputEl.value = "";
  await controller.send(text);
  inputEl.focus();
}

sendBtn.addEventListener("click", () => void sendFromInput());
inputEl.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void sendFromInput();
});
inputEl.addEventListener("input", () => render(controller.view));
silenceBtn.addEventListener("click", () => void controller.sendSilence());
restartBtn.addEventListener("click", () => void controller.start());
retryBtn.addEventListener("click", () => void controller.start());

void controller.start();
