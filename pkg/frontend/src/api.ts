import { Catalogue, Datapoint, FeedSummary, LatestValue } from './types';

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

async function fail(response: Response): Promise<never> {
  let code = 'http-error';
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

/**
 * Pull per-stream latest values out of a feed's EEML snapshot. The hub
 * emits a fixed strict profile, so a targeted scan is enough client-side.
 */
export function parseSnapshot(xml: string): LatestValue[] {
  const out: LatestValue[] = [];
  const dataRe = /<data id="([^"]+)">([\s\S]*?)<\/data>/g;
  for (const match of xml.matchAll(dataRe)) {
    const body = match[2];
    const value = /<current_value at="([^"]+)">([^<]*)<\/current_value>/.exec(body);
    if (!value) continue;
    const unit = /<unit(?:\s+symbol="([^"]*)")?>/.exec(body);
    out.push({
      id: match[1],
      at: value[1],
      value: value[2],
      unitSymbol: unit?.[1],
    });
  }
  return out;
}

/** REST client over the hub's documented routes; nothing else. */
export class HubClient {
  constructor(private hubUrl: string, private key?: string) {}

  setKey(key: string | undefined) {
    this.key = key;
  }

  private headers(): Record<string, string> {
    return this.key ? { 'X-Api-Key': this.key } : {};
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.hubUrl + path, { headers: this.headers() });
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  async catalogue(tag?: string): Promise<Catalogue> {
    const query = tag
      ? `?rel=${encodeURIComponent('urn:X-hypercat:rels:hasTag')}&val=${encodeURIComponent(tag)}`
      : '';
    return this.getJson<Catalogue>(`/cat${query}`);
  }

  async feeds(): Promise<FeedSummary[]> {
    return this.getJson<FeedSummary[]>('/v1/feeds');
  }

  async feed(id: string): Promise<FeedSummary> {
    const all = await this.feeds();
    const found = all.find((f) => f.id === id);
    if (!found) throw new ApiError(404, 'unknown-feed', id);
    return found;
  }

  async latestValues(feedId: string): Promise<LatestValue[]> {
    const response = await fetch(`${this.hubUrl}/v1/feeds/${feedId}`, {
      headers: this.headers(),
    });
    if (response.status === 409) return []; // empty feed: no datapoints yet
    if (!response.ok) await fail(response);
    return parseSnapshot(await response.text());
  }

  async datapoints(
    feedId: string,
    streamId: string,
    start: string,
    end: string,
    limit = 10000,
  ): Promise<Datapoint[]> {
    const query = `?start=${encodeURIComponent(start)}&end=${encodeURIComponent(end)}&limit=${limit}`;
    return this.getJson<Datapoint[]>(
      `/v1/feeds/${feedId}/datastreams/${streamId}/datapoints${query}`,
    );
  }

  async subscribe(feedId: string): Promise<void> {
    const response = await fetch(`${this.hubUrl}/v1/subscriptions`, {
      method: 'POST',
      headers: { ...this.headers(), 'Content-Type': 'application/json' },
      body: JSON.stringify({ feed_id: feedId }),
    });
    if (!response.ok) await fail(response);
  }
}
