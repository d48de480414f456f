import { Datapoint } from './types';

const WIDTH = 640;
const HEIGHT = 180;
const PAD = 28;

/**
 * Inline SVG line chart over the last `limit` datapoints. Pure string
 * output so it renders identically in tests and in the browser.
 */
export function lineChartSvg(points: Datapoint[], limit = 24): string {
  const shown = points.slice(-limit);
  if (shown.length === 0) {
    return `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img"><text x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle">no data</text></svg>`;
  }
  const values = shown.map((p) => Number(p.value));
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  const step = shown.length > 1 ? (WIDTH - 2 * PAD) / (shown.length - 1) : 0;
  const coords = values.map((v, i) => {
    const x = PAD + i * step;
    const y = HEIGHT - PAD - ((v - lo) / span) * (HEIGHT - 2 * PAD);
    return `${x.toFixed(1)},${y.toFixed(1)}`;
  });
  const markers = coords
    .map((c) => {
      const [x, y] = c.split(',');
      return `<circle cx="${x}" cy="${y}" r="2.5"/>`;
    })
    .join('');
  return [
    `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" data-points="${shown.length}">`,
    `<text x="${PAD}" y="14" class="chart-hi">${hi}</text>`,
    `<text x="${PAD}" y="${HEIGHT - 8}" class="chart-lo">${lo}</text>`,
    `<polyline fill="none" points="${coords.join(' ')}"/>`,
    markers,
    '</svg>',
  ].join('');
}
