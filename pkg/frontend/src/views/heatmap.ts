import type { HeatmapPayload } from '../types';

export interface HeatmapCellVm {
  hour: number;
  horizon: number;
  model: string | null;
  value: number | null;
  color: string; // winner color; empty cells hatched by CSS class
}

export interface HeatmapViewModel {
  metric: string;
  option: number;
  hours: number[];
  horizons: number[];
  rows: HeatmapCellVm[][];
  legend: { model: string; color: string }[];
}

const WINNER_COLORS = [
  '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b',
  '#e377c2', '#7f7f7f',
];

export function buildHeatmapViewModel(payload: HeatmapPayload): HeatmapViewModel {
  const models = Array.from(
    new Set(payload.cells.map((c) => c.model).filter((m): m is string => !!m)),
  ).sort();
  const colorOf = new Map(
    models.map((m, i) => [m, WINNER_COLORS[i % WINNER_COLORS.length]]),
  );
  const byKey = new Map(
    payload.cells.map((c) => [`${c.hour}/${c.horizon}`, c]),
  );
  const rows = payload.hours.map((hour) =>
    payload.horizons.map((horizon) => {
      const cell = byKey.get(`${hour}/${horizon}`);
      const model = cell?.model ?? null;
      return {
        hour,
        horizon,
        model,
        value: cell?.value ?? null,
        color: model ? colorOf.get(model)! : '',
      };
    }),
  );
  return {
    metric: payload.metric,
    option: payload.option,
    hours: payload.hours,
    horizons: payload.horizons,
    rows,
    legend: models.map((m) => ({ model: m, color: colorOf.get(m)! })),
  };
}

export function renderHeatmapView(vm: HeatmapViewModel): string {
  const header = vm.horizons.map((h) => `<th>h+${h}</th>`).join('');
  const body = vm.rows
    .map((row, r) => {
      const cells = row
        .map((cell) => {
          if (cell.model === null) {
            return (
              `<td class="cell empty" data-hour="${cell.hour}" ` +
              `data-horizon="${cell.horizon}"></td>`
            );
          }
          return (
            `<td class="cell" data-hour="${cell.hour}" ` +
            `data-horizon="${cell.horizon}" data-model="${cell.model}" ` +
            `style="border-color:${cell.color}">` +
            `${cell.value?.toFixed(1)}</td>`
          );
        })
        .join('');
      return `<tr><th>${vm.hours[r]}:00</th>${cells}</tr>`;
    })
    .join('');
  const legend = vm.legend
    .map(
      (e) =>
        `<span class="legend-entry" style="color:${e.color}">${e.model}</span>`,
    )
    .join(' ');
  return `
<section class="heatmap-view" data-metric="${vm.metric}">
  <h2>Best model per hour and horizon (${vm.metric.toUpperCase()})</h2>
  <table class="heatmap"><thead><tr><th></th>${header}</tr></thead>
  <tbody>${body}</tbody></table>
  <div class="legend">${legend}</div>
</section>`;
}
