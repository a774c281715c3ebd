/**
 * Client-side reader/writer for the frame notation, used to populate the
 * anchor picker and drive the event builder. The service re-parses and
 * validates every submission; this mirror only needs to agree with the
 * server on well-formed input.
 *
 * Eventive:  PRED(e, ROLE=value, ...)
 * Nominal:   head ROLE=value ROLE=value ...
 */

export interface EventExpr {
  kind: "event";
  predicate: string;
  args: Array<[string, string]>;
}

export interface NominalExpr {
  kind: "nominal";
  head: string;
  restrictions: Array<[string, string]>;
}

export type SetExpr = EventExpr | NominalExpr;

const IDENT = /^[A-Za-z_][A-Za-z0-9_]*/;
const ROLE_MARKER = /(?<![A-Za-z0-9_])([A-Z][A-Z0-9_]*)[ \t]*=/g;

export class NotationError extends Error {
  offset: number;
  constructor(message: string, offset: number) {
    super(message);
    this.offset = offset;
  }
}

export function parseNotation(text: string): SetExpr {
  if (!text || !text.trim()) {
    throw new NotationError("empty frame notation", 0);
  }
  const stripped = text.trimStart();
  const match = IDENT.exec(stripped);
  if (match && stripped.slice(match[0].length).trimStart().startsWith("(")) {
    return parseEventive(text);
  }
  return parseNominal(text);
}

function parseEventive(text: string): EventExpr {
  let pos = 0;
  const n = text.length;
  const skipWs = () => {
    while (pos < n && /\s/.test(text[pos])) pos += 1;
  };
  skipWs();
  const predMatch = IDENT.exec(text.slice(pos));
  if (!predMatch) throw new NotationError("empty predicate", pos);
  const predicate = predMatch[0].toUpperCase();
  pos += predMatch[0].length;
  skipWs();
  pos += 1; // "("
  skipWs();
  if (!text.slice(pos).startsWith("e")) {
    throw new NotationError("expected event variable 'e'", pos);
  }
  pos += 1;
  const args: Array<[string, string]> = [];
  for (;;) {
    skipWs();
    if (pos >= n) throw new NotationError("unbalanced parentheses: missing ')'", n);
    const ch = text[pos];
    if (ch === ")") {
      pos += 1;
      skipWs();
      if (pos !== n) throw new NotationError("unexpected text after ')'", pos);
      return { kind: "event", predicate, args };
    }
    if (ch !== ",") throw new NotationError("expected ',' or ')'", pos);
    pos += 1;
    skipWs();
    const roleMatch = IDENT.exec(text.slice(pos));
    if (!roleMatch) throw new NotationError("empty role", pos);
    const role = roleMatch[0].toUpperCase();
    pos += roleMatch[0].length;
    skipWs();
    if (text[pos] !== "=") throw new NotationError(`missing '=' after role ${role}`, pos);
    pos += 1;
    const start = pos;
    let depth = 0;
    while (pos < n) {
      const c = text[pos];
      if (c === "(") depth += 1;
      else if (c === ")") {
        if (depth === 0) break;
        depth -= 1;
      } else if (c === "," && depth === 0) break;
      pos += 1;
    }
    if (pos >= n) throw new NotationError("unbalanced parentheses: missing ')'", n);
    args.push([role, text.slice(start, pos).trim()]);
  }
}

function parseNominal(text: string): NominalExpr {
  for (const ch of ["(", ")", ","]) {
    const idx = text.indexOf(ch);
    if (idx !== -1) throw new NotationError(`'${ch}' not allowed in nominal expression`, idx);
  }
  const markers = [...text.matchAll(ROLE_MARKER)];
  if (markers.length === 0) {
    return { kind: "nominal", head: text.trim(), restrictions: [] };
  }
  const head = text.slice(0, markers[0].index).trim();
  if (!head) throw new NotationError("empty nominal head", 0);
  const restrictions: Array<[string, string]> = [];
  markers.forEach((marker, i) => {
    const valueStart = (marker.index ?? 0) + marker[0].length;
    const valueEnd = i + 1 < markers.length ? markers[i + 1].index : text.length;
    restrictions.push([marker[1], text.slice(valueStart, valueEnd).trim()]);
  });
  return { kind: "nominal", head, restrictions };
}

export function serializeNotation(expr: SetExpr): string {
  if (expr.kind === "event") {
    const parts = expr.args.map(([role, value]) => `, ${role}=${value}`).join("");
    return `${expr.predicate}(e${parts})`;
  }
  const parts = expr.restrictions.map(([role, value]) => ` ${role}=${value}`).join("");
  return `${expr.head}${parts}`;
}

/** Anchor choices for a CS string, rendered like "#2=ASSET"; a nominal CS
 * also offers the head anchor "#0". Unparseable input yields no choices. */
export function anchorChoices(cs: string): Array<{ index: number; role: string | null; label: string }> {
  let expr: SetExpr;
  try {
    expr = parseNotation(cs);
  } catch {
    return [];
  }
  if (expr.kind === "event") {
    return expr.args.map(([role], i) => ({
      index: i + 1,
      role,
      label: `#${i + 1}=${role}`,
    }));
  }
  const head = [{ index: 0, role: null as string | null, label: `#0 (${expr.head})` }];
  return head.concat(
    expr.restrictions.map(([role], i) => ({
      index: i + 1,
      role,
      label: `#${i + 1}=${role}`,
    })),
  );
}
