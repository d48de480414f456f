import { ApiError } from './api';
import { lineChartSvg } from './chart';
import {
  Catalogue,
  CatalogueItem,
  Datapoint,
  FeedSummary,
  LatestValue,
  REL_DESCRIPTION,
  REL_TAG,
} from './types';

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function rel(item: CatalogueItem, name: string): string[] {
  return item['item-metadata'].filter((m) => m.rel === name).map((m) => m.val);
}

function feedIdFromHref(href: string): string {
  const parts = href.split('/');
  return parts[parts.length - 1];
}

/** One catalogue entry as a clickable card. */
export function renderFeedCard(item: CatalogueItem): string {
  const id = feedIdFromHref(item.href);
  const title = rel(item, REL_DESCRIPTION)[0] ?? id;
  const tags = rel(item, REL_TAG);
  const lat = rel(item, 'http://www.w3.org/2003/01/geo/wgs84_pos#lat')[0];
  const lon = rel(item, 'http://www.w3.org/2003/01/geo/wgs84_pos#long')[0];
  const tagHtml = tags.map((t) => `<span class="tag">${esc(t)}</span>`).join(' ');
  const geo = lat !== undefined && lon !== undefined ? `${lat}, ${lon}` : '';
  return [
    `<article class="feed-card" data-feed="${esc(id)}">`,
    `<h3><a href="#/feed/${esc(id)}">${esc(title)}</a></h3>`,
    `<p class="geo">${esc(geo)}</p>`,
    `<p class="tags">${tagHtml}</p>`,
    '</article>',
  ].join('');
}

export function renderCatalogue(cat: Catalogue): string {
  if (cat.items.length === 0) {
    return '<p class="empty-state">No feeds published yet.</p>';
  }
  return `<section class="feed-list">${cat.items.map(renderFeedCard).join('')}</section>`;
}

function latestCell(latest: LatestValue | undefined): string {
  if (!latest) return '<td class="latest">-</td><td class="at"></td>';
  const unit = latest.unitSymbol ? ` ${esc(latest.unitSymbol)}` : '';
  return `<td class="latest">${esc(latest.value)}${unit}</td><td class="at">${esc(latest.at)}</td>`;
}

/**
 * Feed detail: one row per stream with its latest value, plus an optional
 * chart section. Every number shown comes straight from an API response.
 */
export function renderFeedDetail(
  feed: FeedSummary,
  latest: LatestValue[],
  selectedStream?: string,
  history?: Datapoint[],
): string {
  const byId = new Map(latest.map((v) => [v.id, v]));
  const rows = feed.streams
    .map((s) => {
      const cls = s.id === selectedStream ? ' class="selected"' : '';
      return (
        `<tr data-stream="${esc(s.id)}"${cls}>` +
        `<td class="stream-id"><a href="#/feed/${esc(feed.id)}/${esc(s.id)}">${esc(s.id)}</a></td>` +
        `<td class="unit">${esc(s.unit_label)}</td>` +
        latestCell(byId.get(s.id)) +
        '</tr>'
      );
    })
    .join('');
  const chart =
    selectedStream && history
      ? `<section class="history"><h3>${esc(selectedStream)}</h3>${lineChartSvg(history)}</section>`
      : '';
  return [
    `<article class="feed-detail" data-feed="${esc(feed.id)}">`,
    `<h2>${esc(feed.title)}</h2>`,
    `<p class="geo">${feed.location.lat}, ${feed.location.lon}</p>`,
    '<table class="streams"><thead><tr><th>stream</th><th>unit</th><th>latest</th><th>at</th></tr></thead>',
    `<tbody>${rows}</tbody></table>`,
    chart,
    '</article>',
  ].join('');
}

export function renderSubscribePrompt(feedId: string): string {
  return (
    `<div class="subscribe-prompt" data-feed="${esc(feedId)}">` +
    '<p>Subscribe to this feed to view its history.</p>' +
    `<button class="subscribe" data-feed="${esc(feedId)}">Subscribe</button>` +
    '</div>'
  );
}

export function renderKeyPrompt(): string {
  return '<p class="key-prompt">Enter an API key above to view latest values.</p>';
}

export function renderErrorBanner(error: unknown): string {
  let message = 'The hub is unreachable.';
  if (error instanceof ApiError) message = `${error.code}: ${error.message}`;
  else if (error instanceof Error && error.message) message = error.message;
  return (
    `<div class="error-banner" role="alert"><p>${esc(message)}</p>` +
    '<button class="retry">Retry</button></div>'
  );
}

export function renderSubscribed(feedId: string): string {
  return `<p class="subscribed" data-feed="${esc(feedId)}">Subscribed.</p>`;
}
