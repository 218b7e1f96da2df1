#!/usr/bin/env node
import { writeFileSync } from 'node:fs'
import { parseArgs } from 'node:util'
import { CsvError, loadCsv } from './csv.js'
import { renderSvg } from './plot.js'

const USAGE =
  'usage: plot --csv <path> --x <col> --y <col> --group <cols> --out <path> [--logy]'

export function main(argv: string[]): number {
  if (argv[0] !== 'plot') {
    console.error(USAGE)
    return 1
  }
  let args
  try {
    args = parseArgs({
      args: argv.slice(1),
      options: {
        csv: { type: 'string' },
        x: { type: 'string' },
        y: { type: 'string' },
        group: { type: 'string' },
        out: { type: 'string' },
        logy: { type: 'boolean', default: false },
      },
    }).values
  } catch (err) {
    console.error(`${(err as Error).message}\n${USAGE}`)
    return 1
  }
  for (const key of ['csv', 'x', 'y', 'group', 'out'] as const) {
    if (!args[key]) {
      console.error(`missing required option --${key}\n${USAGE}`)
      return 1
    }
  }

  try {
    const table = loadCsv(args.csv!)
    const svg = renderSvg(table, {
      x: args.x!,
      y: args.y!,
      group: args.group!.split(',').map((s) => s.trim()).filter(Boolean),
      logy: args.logy!,
    })
    writeFileSync(args.out!, svg)
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`)
      return 1
    }
    console.error(`error writing '${args.out}': ${(err as Error).message}`)
    return 2
  }
  console.log(`wrote ${args.out}`)
  return 0
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!)
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)))
}
