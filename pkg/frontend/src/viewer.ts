/**
 * Renders a compiled message as a single row of binding text and SC icons.
 * Clicking an SC icon opens a popup with the ST icon and the molecule icons;
 * semantic variables are never shown as icons. Switching the binding
 * language recompiles the source text via the service.
 */

import { IconRef, IdeographSegment, WireMessage, parseWireMessage } from "./types";

export interface ViewState {
  message: WireMessage;
  /** Indices (into message.segments) of ideographs with an open popup. */
  expanded: Set<number>;
  bindingLang: string;
  /** Service base URL, or null in static-file mode (no recompile). */
  serviceBase: string | null;
}

export function createViewState(doc: unknown, serviceBase: string | null = null): ViewState {
  const message = parseWireMessage(doc);
  return {
    message,
    expanded: new Set(),
    bindingLang: message.binding_lang,
    serviceBase,
  };
}

/** Flip popup visibility for an ideograph segment; no-op on text segments. */
export function toggleExpand(state: ViewState, segmentIndex: number): ViewState {
  const segment = state.message.segments[segmentIndex];
  if (!segment || segment.kind !== "ideograph") {
    return state;
  }
  const expanded = new Set(state.expanded);
  if (expanded.has(segmentIndex)) {
    expanded.delete(segmentIndex);
  } else {
    expanded.add(segmentIndex);
  }
  return { ...state, expanded };
}

function iconUrl(state: ViewState, ref: IconRef): string | null {
  if (!ref.icon) {
    return null;
  }
  if (state.serviceBase === null) {
    return null; // static-file mode: no icon endpoint available
  }
  return `${state.serviceBase}/v1/icons/${encodeURIComponent(ref.icon)}`;
}

/**
 * An icon element with alt text; falls back to a placeholder glyph showing
 * the id when no icon can be loaded.
 */
function iconElement(state: ViewState, ref: IconRef, role: string): HTMLElement {
  const url = iconUrl(state, ref);
  if (url === null) {
    const span = document.createElement("span");
    span.className = `nim-icon nim-icon-missing nim-${role}`;
    span.textContent = `□ ${ref.id}`;
    span.setAttribute("role", "img");
    span.setAttribute("aria-label", ref.id);
    return span;
  }
  const img = document.createElement("img");
  img.className = `nim-icon nim-${role}`;
  img.src = url;
  img.alt = ref.id;
  img.addEventListener("error", () => {
    img.replaceWith(iconElement({ ...state, serviceBase: null }, ref, role));
  });
  return img;
}

function popupElement(state: ViewState, segment: IdeographSegment): HTMLElement {
  const popup = document.createElement("div");
  popup.className = "nim-popup";

  const st = document.createElement("div");
  st.className = "nim-popup-st";
  st.appendChild(iconElement(state, segment.st, "st"));
  const stLabel = document.createElement("span");
  stLabel.className = "nim-label";
  stLabel.textContent = segment.st.id;
  st.appendChild(stLabel);
  popup.appendChild(st);

  // molecules only; the semantic variable stays implicit
  const molecules = document.createElement("div");
  molecules.className = "nim-popup-molecules";
  for (const tuple of segment.explication) {
    for (const molecule of tuple.sm) {
      const item = document.createElement("span");
      item.className = "nim-molecule";
      item.appendChild(iconElement(state, molecule, "sm"));
      const label = document.createElement("span");
      label.className = "nim-label";
      label.textContent = molecule.id;
      item.appendChild(label);
      molecules.appendChild(item);
    }
  }
  popup.appendChild(molecules);
  return popup;
}

export type ToggleHandler = (segmentIndex: number) => void;

/**
 * Build the message row. The caller owns state transitions: `onToggle`
 * receives the segment index of a clicked SC icon and should re-render with
 * the state returned by toggleExpand.
 */
export function renderMessage(state: ViewState, onToggle?: ToggleHandler): HTMLElement {
  const row = document.createElement("div");
  row.className = "nim-message";
  state.message.segments.forEach((segment, index) => {
    if (segment.kind === "text") {
      const span = document.createElement("span");
      span.className = "nim-text";
      span.textContent = segment.surface;
      row.appendChild(span);
      return;
    }
    const box = document.createElement("span");
    box.className = "nim-ideograph";
    box.dataset.cw = segment.cw;
    const button = document.createElement("button");
    button.className = "nim-sc-button";
    button.setAttribute("aria-expanded", String(state.expanded.has(index)));
    button.appendChild(iconElement(state, segment.sc, "sc"));
    button.addEventListener("click", () => {
      if (onToggle) {
        onToggle(index);
      }
    });
    box.appendChild(button);
    if (state.expanded.has(index)) {
      box.appendChild(popupElement(state, segment));
    }
    row.appendChild(box);
  });
  return row;
}

export interface SwitchResult {
  state: ViewState;
  error: string | null;
}

let inflight: AbortController | null = null;

/**
 * Recompile the source text with a new binding language. Later calls cancel
 * earlier in-flight requests; on any failure the previous state is returned
 * unchanged together with an error message for a toast.
 */
export async function switchLanguage(state: ViewState, lang: string): Promise<SwitchResult> {
  if (state.serviceBase === null) {
    return { state, error: "language switching needs a compile service" };
  }
  if (inflight !== null) {
    inflight.abort();
  }
  const controller = new AbortController();
  inflight = controller;
  try {
    const resp = await fetch(`${state.serviceBase}/v1/compile`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text: state.message.source_text, binding_lang: lang }),
      signal: controller.signal,
    });
    if (!resp.ok) {
      const body = (await resp.json().catch(() => ({}))) as { error?: string };
      return { state, error: body.error ?? `compile failed (${resp.status})` };
    }
    const message = parseWireMessage(await resp.json());
    return {
      state: { ...state, message, bindingLang: lang, expanded: new Set() },
      error: null,
    };
  } catch (e) {
    if (controller.signal.aborted) {
      return { state, error: null }; // superseded by a newer request
    }
    return { state, error: e instanceof Error ? e.message : String(e) };
  } finally {
    if (inflight === controller) {
      inflight = null;
    }
  }
}
