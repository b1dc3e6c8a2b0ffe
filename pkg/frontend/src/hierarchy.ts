/**
 * Node-link rendering of the subsumption hierarchy as SVG.
 *
 * Edge classes mirror the service's provenance tags: existing asserted and
 * inferred relations draw grey (inferred dotted), unrepaired missing
 * relations blue dashed, repair-added relations black.  The two concepts of
 * the axiom under repair are highlighted.  The view box scales with a zoom
 * factor so panels can zoom without re-layout.
 */

import { HierarchyEdge, HierarchyView } from './api.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

const EDGE_CLASS: Record<HierarchyEdge['provenance'], string> = {
  asserted: 'edge-asserted',
  inferred: 'edge-inferred',
  'added-by-repair': 'edge-added-by-repair',
  'missing-unrepaired': 'edge-missing-unrepaired',
};

const NODE_W = 132;
const NODE_H = 26;
const GAP_X = 24;
const GAP_Y = 60;

interface Layout {
  positions: Map<string, { x: number; y: number }>;
  width: number;
  height: number;
}

/** Longest-path layering: a node sits one row below its deepest superconcept. */
export function layoutHierarchy(view: HierarchyView): Layout {
  const parents = new Map<string, string[]>();
  for (const node of view.nodes) parents.set(node, []);
  for (const edge of view.edges) {
    if (edge.provenance === 'missing-unrepaired') continue;
    if (parents.has(edge.sub) && parents.has(edge.sup)) {
      parents.get(edge.sub)!.push(edge.sup);
    }
  }
  const depth = new Map<string, number>();
  const depthOf = (node: string, seen: Set<string>): number => {
    const cached = depth.get(node);
    if (cached !== undefined) return cached;
    const ups = (parents.get(node) ?? []).filter((p) => !seen.has(p));
    const d = ups.length === 0 ? 0 : 1 + Math.max(...ups.map((p) => depthOf(p, new Set([...seen, node]))));
    depth.set(node, d);
    return d;
  };
  for (const node of view.nodes) depthOf(node, new Set());

  const rows = new Map<number, string[]>();
  for (const node of [...view.nodes].sort()) {
    const d = depth.get(node) ?? 0;
    if (!rows.has(d)) rows.set(d, []);
    rows.get(d)!.push(node);
  }
  const positions = new Map<string, { x: number; y: number }>();
  let width = 0;
  for (const [d, row] of [...rows.entries()].sort((a, b) => a[0] - b[0])) {
    const rowWidth = row.length * (NODE_W + GAP_X);
    width = Math.max(width, rowWidth);
    row.forEach((node, i) => {
      positions.set(node, {
        x: i * (NODE_W + GAP_X) + GAP_X / 2,
        y: d * (NODE_H + GAP_Y) + GAP_Y / 2,
      });
    });
  }
  // center the rows
  for (const [, row] of rows) {
    const rowWidth = row.length * (NODE_W + GAP_X);
    const offset = (width - rowWidth) / 2;
    for (const node of row) {
      const p = positions.get(node)!;
      positions.set(node, { x: p.x + offset, y: p.y });
    }
  }
  const height = rows.size * (NODE_H + GAP_Y) + GAP_Y / 2;
  return { positions, width: Math.max(width, NODE_W + GAP_X), height };
}

/** Drop inferred edges implied by a chain of drawn edges to keep panels readable. */
export function visibleEdges(view: HierarchyView): HierarchyEdge[] {
  const supsOf = new Map<string, Set<string>>();
  for (const edge of view.edges) {
    if (edge.provenance === 'missing-unrepaired') continue;
    if (!supsOf.has(edge.sub)) supsOf.set(edge.sub, new Set());
    supsOf.get(edge.sub)!.add(edge.sup);
  }
  return view.edges.filter((edge) => {
    if (edge.provenance !== 'inferred') return true;
    const mids = supsOf.get(edge.sub);
    if (!mids) return true;
    for (const mid of mids) {
      if (mid !== edge.sup && supsOf.get(mid)?.has(edge.sup)) return false;
    }
    return true;
  });
}

export function renderHierarchySvg(
  doc: Document,
  view: HierarchyView,
  highlight: Set<string> = new Set(),
  zoom = 1,
): SVGSVGElement {
  const { positions, width, height } = layoutHierarchy(view);
  const svg = doc.createElementNS(SVG_NS, 'svg') as SVGSVGElement;
  svg.setAttribute('class', 'hierarchy');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('width', String(width * zoom));
  svg.setAttribute('height', String(height * zoom));

  for (const edge of visibleEdges(view)) {
    const from = positions.get(edge.sub);
    const to = positions.get(edge.sup);
    if (!from || !to) continue;
    const line = doc.createElementNS(SVG_NS, 'line');
    line.setAttribute('class', `edge ${EDGE_CLASS[edge.provenance]}`);
    line.setAttribute('data-sub', edge.sub);
    line.setAttribute('data-sup', edge.sup);
    line.setAttribute('x1', String(from.x + NODE_W / 2));
    line.setAttribute('y1', String(from.y));
    line.setAttribute('x2', String(to.x + NODE_W / 2));
    line.setAttribute('y2', String(to.y + NODE_H));
    svg.appendChild(line);
  }

  for (const node of view.nodes) {
    const p = positions.get(node);
    if (!p) continue;
    const group = doc.createElementNS(SVG_NS, 'g');
    const emphasized = highlight.has(node);
    group.setAttribute('class', emphasized ? 'node node-highlight' : 'node');
    group.setAttribute('data-name', node);
    const rect = doc.createElementNS(SVG_NS, 'rect');
    rect.setAttribute('x', String(p.x));
    rect.setAttribute('y', String(p.y));
    rect.setAttribute('rx', '6');
    rect.setAttribute('width', String(NODE_W));
    rect.setAttribute('height', String(NODE_H));
    const label = doc.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', String(p.x + NODE_W / 2));
    label.setAttribute('y', String(p.y + NODE_H / 2 + 4));
    label.setAttribute('text-anchor', 'middle');
    label.textContent = node;
    group.appendChild(rect);
    group.appendChild(label);
    svg.appendChild(group);
  }
  return svg;
}
