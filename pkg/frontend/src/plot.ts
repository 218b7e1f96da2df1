import { CsvError, requireColumns, Table } from './csv.js'

export interface PlotSpec {
  x: string
  y: string
  group: string[]
  logy: boolean
}

interface Series {
  label: string
  points: { x: number; y: number }[]
}

const WIDTH = 860
const HEIGHT = 520
const MARGIN = { left: 70, right: 210, top: 20, bottom: 50 }

const PALETTE = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
  '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf',
]

function groupRows(table: Table, spec: PlotSpec): Series[] {
  const byKey = new Map<string, Series>()
  for (const row of table.rows) {
    const xv = Number(row[spec.x])
    const yv = Number(row[spec.y])
    if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue
    if (spec.logy && yv <= 0) continue
    const label = spec.group.map((c) => `${c}=${row[c]}`).join(' ')
    let series = byKey.get(label)
    if (!series) {
      series = { label, points: [] }
      byKey.set(label, series)
    }
    series.points.push({ x: xv, y: yv })
  }
  const all = [...byKey.values()]
  for (const s of all) s.points.sort((a, b) => a.x - b.x)
  // insertion order already follows the CSV; keep it for stable colors
  return all
}

function extent(values: number[]): [number, number] {
  let lo = Math.min(...values)
  let hi = Math.max(...values)
  if (lo === hi) {
    // a flat or single-point series still needs a nonempty axis range
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.5
    lo -= pad
    hi += pad
  }
  return [lo, hi]
}

/** Round tick steps to 1/2/5 times a power of ten. */
function linearTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo
  const rawStep = span / target
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)))
  let step = mag
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag
      break
    }
  }
  const ticks: number[] = []
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t)
  }
  return ticks
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = []
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const t = Math.pow(10, e)
    if (t >= lo / (1 + 1e-9) && t <= hi * (1 + 1e-9)) ticks.push(t)
  }
  return ticks.length >= 2 ? ticks : [lo, hi]
}

function fmt(value: number): string {
  const s = value.toPrecision(6)
  return String(Number(s))
}

function px(value: number): string {
  return value.toFixed(2)
}

const esc = (s: string) =>
  s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')

export function renderSvg(table: Table, spec: PlotSpec): string {
  requireColumns(table, [spec.x, spec.y, ...spec.group])
  const series = groupRows(table, spec)
  if (series.length === 0) {
    throw new CsvError(
      `no plottable rows for x='${spec.x}', y='${spec.y}'` +
        (spec.logy ? ' (log scale drops values <= 0)' : ''),
    )
  }

  const xs = series.flatMap((s) => s.points.map((p) => p.x))
  const ys = series.flatMap((s) => s.points.map((p) => p.y))
  const [xLo, xHi] = extent(xs)
  const [yLo, yHi] = extent(ys)

  const plotW = WIDTH - MARGIN.left - MARGIN.right
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom
  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW
  const sy = spec.logy
    ? (v: number) =>
        MARGIN.top +
        plotH -
        ((Math.log10(v) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))) * plotH
    : (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  )
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`)

  // axes
  const x0 = MARGIN.left
  const y0 = MARGIN.top + plotH
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
  )
  for (const t of linearTicks(xLo, xHi)) {
    const X = px(sx(t))
    parts.push(
      `<line x1="${X}" y1="${y0}" x2="${X}" y2="${y0 + 5}" stroke="black"/>`,
      `<text x="${X}" y="${y0 + 18}" text-anchor="middle">${fmt(t)}</text>`,
    )
  }
  const yTicks = spec.logy ? logTicks(yLo, yHi) : linearTicks(yLo, yHi)
  for (const t of yTicks) {
    const Y = px(sy(t))
    parts.push(
      `<line x1="${x0 - 5}" y1="${Y}" x2="${x0}" y2="${Y}" stroke="black"/>`,
      `<text x="${x0 - 8}" y="${Y}" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
      `<line x1="${x0}" y1="${Y}" x2="${x0 + plotW}" y2="${Y}" stroke="#dddddd"/>`,
    )
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(spec.x)}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(spec.y)}` +
      `${spec.logy ? ' (log)' : ''}</text>`,
  )

  // series
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]
    const coords = s.points.map((p) => `${px(sx(p.x))},${px(sy(p.y))}`)
    if (coords.length > 1) {
      parts.push(
        `<polyline points="${coords.join(' ')}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
      )
    }
    for (const c of coords) {
      const [cx, cy] = c.split(',')
      parts.push(`<circle cx="${cx}" cy="${cy}" r="3" fill="${color}"/>`)
    }
    const ly = MARGIN.top + 10 + i * 18
    const lx = MARGIN.left + plotW + 15
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="1.5"/>`,
      `<circle cx="${lx + 11}" cy="${ly}" r="3" fill="${color}"/>`,
      `<text x="${lx + 28}" y="${ly}" dominant-baseline="middle">${esc(s.label)}</text>`,
    )
  })

  parts.push('</svg>')
  return parts.join('\n') + '\n'
}
