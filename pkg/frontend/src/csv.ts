import { readFileSync } from 'node:fs'
import Papa from 'papaparse'

export interface Table {
  columns: string[]
  rows: Record<string, string>[]
}

export class CsvError extends Error {}

export function loadCsv(path: string): Table {
  let text: string
  try {
    text = readFileSync(path, 'utf8')
  } catch (err) {
    throw new CsvError(`cannot read '${path}': ${(err as Error).message}`)
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  })
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]
    throw new CsvError(`malformed CSV at row ${e.row}: ${e.message}`)
  }
  const columns = parsed.meta.fields ?? []
  if (columns.length === 0) {
    throw new CsvError(`'${path}' has no header row`)
  }
  return { columns, rows: parsed.data }
}

export function requireColumns(table: Table, wanted: string[]): void {
  for (const col of wanted) {
    if (!table.columns.includes(col)) {
      throw new CsvError(
        `column '${col}' not found in CSV (available: ${table.columns.join(', ')})`,
      )
    }
  }
}
