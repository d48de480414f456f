export interface RelVal {
  rel: string;
  val: string;
}

export interface CatalogueItem {
  href: string;
  'item-metadata': RelVal[];
}

export interface Catalogue {
  'catalogue-metadata': RelVal[];
  items: CatalogueItem[];
}

export interface StreamSummary {
  id: string;
  unit_label: string;
  unit_symbol: string;
  tags: string[];
}

export interface FeedSummary {
  id: string;
  title: string;
  location: { lat: number; lon: number };
  tags: string[];
  provider: string;
  created_at: string;
  streams: StreamSummary[];
}

export interface Datapoint {
  at: string;
  value: string;
}

/** One stream's latest reading, lifted out of the feed's EEML snapshot. */
export interface LatestValue {
  id: string;
  at: string;
  value: string;
  unitSymbol?: string;
}

export const REL_DESCRIPTION = 'urn:X-hypercat:rels:hasDescription:en';
export const REL_TAG = 'urn:X-hypercat:rels:hasTag';
