import { Catalogue, CatalogueItem, FeedSummary } from '../src/types';

export const EMIRATES: [string, string, number, number][] = [
  ['abu-dhabi-weather', 'Abu Dhabi Weather', 24.45, 54.38],
  ['ajman-weather', 'Ajman Weather', 25.41, 55.44],
  ['dubai-weather', 'Dubai Weather', 25.2, 55.27],
  ['fujairah-weather', 'Fujairah Weather', 25.13, 56.33],
  ['ras-al-khaimah-weather', 'Ras Al Khaimah Weather', 25.79, 55.94],
  ['sharjah-weather', 'Sharjah Weather', 25.35, 55.42],
  ['umm-al-quwain-weather', 'Umm Al Quwain Weather', 25.56, 55.55],
];

export const STREAMS: [string, string, string][] = [
  ['humidity', 'Percent', '%'],
  ['precipitation', 'Millimetres', 'mm'],
  ['pressure', 'Hectopascal', 'hPa'],
  ['temperature', 'Celsius', 'C'],
  ['wind_speed', 'KilometresPerHour', 'km/h'],
];

function item(id: string, title: string, lat: number, lon: number): CatalogueItem {
  return {
    href: `/v1/feeds/${id}`,
    'item-metadata': [
      { rel: 'urn:X-hypercat:rels:isContentType', val: 'application/xml' },
      { rel: 'urn:X-hypercat:rels:hasDescription:en', val: title },
      { rel: 'urn:X-hypercat:rels:hasTag', val: 'weather' },
      { rel: 'http://www.w3.org/2003/01/geo/wgs84_pos#lat', val: String(lat) },
      { rel: 'http://www.w3.org/2003/01/geo/wgs84_pos#long', val: String(lon) },
    ],
  };
}

export function sevenFeedCatalogue(): Catalogue {
  return {
    'catalogue-metadata': [
      {
        rel: 'urn:X-hypercat:rels:isContentType',
        val: 'application/vnd.hypercat.catalogue+json',
      },
      { rel: 'urn:X-hypercat:rels:hasDescription:en', val: 'City data hub catalogue' },
    ],
    items: EMIRATES.map(([id, title, lat, lon]) => item(id, title, lat, lon)),
  };
}

export function weatherFeed(id = 'dubai-weather'): FeedSummary {
  const [, title, lat, lon] = EMIRATES.find((e) => e[0] === id)!;
  return {
    id,
    title,
    location: { lat, lon },
    tags: ['weather'],
    provider: 'k1',
    created_at: '2016-07-20T00:00:00Z',
    streams: STREAMS.map(([sid, label, symbol]) => ({
      id: sid,
      unit_label: label,
      unit_symbol: symbol,
      tags: [],
    })),
  };
}

export const SNAPSHOT_XML = `<?xml version="1.0" encoding="UTF-8"?>
<eeml xmlns="http://www.eeml.org/xsd/0.5.1" version="0.5.1">
  <environment updated="2016-07-20T23:00:00Z">
    <title>Dubai Weather</title>
    <location domain="physical" exposure="outdoor" disposition="fixed">
      <lat>25.2</lat>
      <lon>55.27</lon>
    </location>
    <data id="humidity">
      <current_value at="2016-07-20T23:00:00Z">59.0</current_value>
      <unit symbol="%">Percent</unit>
    </data>
    <data id="temperature">
      <current_value at="2016-07-20T23:00:00Z">41.5</current_value>
      <unit symbol="C">Celsius</unit>
    </data>
  </environment>
</eeml>
`;
