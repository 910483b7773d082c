/**
 * Wire JSON schema v1 as produced by the compile service. The viewer never
 * talks to the ontology directly; icon ids are inlined in the message.
 */

export interface IconRef {
  id: string;
  icon: string;
}

export interface ExplicationTuple {
  sv: string;
  sm: IconRef[];
}

export interface TextSegment {
  kind: "text";
  surface: string;
}

export interface IdeographSegment {
  kind: "ideograph";
  cw: string;
  sc: IconRef;
  st: IconRef;
  explication: ExplicationTuple[];
}

export type Segment = TextSegment | IdeographSegment;

export interface WireMessage {
  version: 1;
  source_text: string;
  source_lang: string;
  binding_lang: string;
  ontology_version: number;
  segments: Segment[];
}

export class SchemaError extends Error {
  constructor(message: string, readonly path: string) {
    super(`${message} (at ${path || "/"})`);
    this.name = "SchemaError";
  }
}

function requireKey(obj: unknown, key: string, path: string): unknown {
  if (typeof obj !== "object" || obj === null || !(key in obj)) {
    throw new SchemaError(`missing required key "${key}"`, `${path}/${key}`);
  }
  return (obj as Record<string, unknown>)[key];
}

function parseIconRef(raw: unknown, path: string): IconRef {
  return {
    id: String(requireKey(raw, "id", path)),
    icon: String(requireKey(raw, "icon", path)),
  };
}

/** Validate a parsed JSON document against wire schema v1. */
export function parseWireMessage(doc: unknown): WireMessage {
  const version = requireKey(doc, "version", "");
  if (version !== 1) {
    throw new SchemaError(`unknown wire version ${JSON.stringify(version)}`, "/version");
  }
  const rawSegments = requireKey(doc, "segments", "");
  if (!Array.isArray(rawSegments)) {
    throw new SchemaError("segments must be an array", "/segments");
  }
  const segments: Segment[] = rawSegments.map((raw, i) => {
    const path = `/segments/${i}`;
    const kind = requireKey(raw, "kind", path);
    if (kind === "text") {
      return { kind: "text", surface: String(requireKey(raw, "surface", path)) };
    }
    if (kind === "ideograph") {
      const rawExpl = requireKey(raw, "explication", path);
      if (!Array.isArray(rawExpl)) {
        throw new SchemaError("explication must be an array", `${path}/explication`);
      }
      return {
        kind: "ideograph",
        cw: String(requireKey(raw, "cw", path)),
        sc: parseIconRef(requireKey(raw, "sc", path), `${path}/sc`),
        st: parseIconRef(requireKey(raw, "st", path), `${path}/st`),
        explication: rawExpl.map((t, j) => {
          const tpath = `${path}/explication/${j}`;
          const sm = requireKey(t, "sm", tpath);
          if (!Array.isArray(sm)) {
            throw new SchemaError("sm must be an array", `${tpath}/sm`);
          }
          return {
            sv: String(requireKey(t, "sv", tpath)),
            sm: sm.map((m, k) => parseIconRef(m, `${tpath}/sm/${k}`)),
          };
        }),
      };
    }
    throw new SchemaError(`unknown segment kind ${JSON.stringify(kind)}`, `${path}/kind`);
  });
  return {
    version: 1,
    source_text: String(requireKey(doc, "source_text", "")),
    source_lang: String(requireKey(doc, "source_lang", "")),
    binding_lang: String(requireKey(doc, "binding_lang", "")),
    ontology_version: Number(requireKey(doc, "ontology_version", "")),
    segments,
  };
}
