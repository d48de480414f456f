import { ApiError, HubClient } from './api';
import {
  renderCatalogue,
  renderErrorBanner,
  renderFeedDetail,
  renderKeyPrompt,
  renderSubscribePrompt,
  renderSubscribed,
} from './render';
import { PortalSession } from './session';
import { Datapoint, LatestValue } from './types';

const HISTORY_POINTS = 24;
const EPOCH_START = '1970-01-01T00:00:00Z';
const FAR_FUTURE = '9999-12-31T23:59:59Z';

/** Hash-routed single page app. Mount once against the document. */
export class PortalApp {
  private client: HubClient;

  constructor(
    private session: PortalSession,
    private root: HTMLElement,
    fetchClient?: HubClient,
  ) {
    this.client = fetchClient ?? new HubClient(session.hubUrl);
  }

  start() {
    window.addEventListener('hashchange', () => void this.route());
    this.root.addEventListener('click', (event) => void this.onClick(event));
    void this.route();
  }

  useKey(key: string) {
    this.session.enterKey(key);
    this.client.setKey(this.session.enteredKey);
    void this.route();
  }

  async route() {
    const hash = window.location.hash.replace(/^#\/?/, '');
    const [page, feedId, streamId] = hash.split('/');
    try {
      if (page === 'feed' && feedId) {
        this.root.innerHTML = await this.feedPage(feedId, streamId);
      } else {
        this.root.innerHTML = renderCatalogue(await this.client.catalogue());
      }
    } catch (error) {
      this.root.innerHTML = renderErrorBanner(error);
    }
  }

  private async feedPage(feedId: string, streamId?: string): Promise<string> {
    const feed = await this.client.feed(feedId);
    let latest: LatestValue[] = [];
    let needKey = false;
    try {
      latest = await this.client.latestValues(feedId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) needKey = true;
      else throw error;
    }
    let extra = needKey ? renderKeyPrompt() : '';
    let history: Datapoint[] | undefined;
    if (streamId) {
      try {
        history = await this.client.datapoints(
          feedId, streamId, EPOCH_START, FAR_FUTURE, HISTORY_POINTS * 100);
        history = history.slice(-HISTORY_POINTS);
      } catch (error) {
        if (error instanceof ApiError && (error.status === 403 || error.status === 401)) {
          extra += renderSubscribePrompt(feedId);
        } else {
          throw error;
        }
      }
    }
    return renderFeedDetail(feed, latest, streamId, history) + extra;
  }

  private async onClick(event: Event) {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    if (target.classList.contains('retry')) {
      await this.route();
    } else if (target.classList.contains('subscribe')) {
      const feedId = target.getAttribute('data-feed');
      if (!feedId) return;
      try {
        await this.client.subscribe(feedId);
        this.root.insertAdjacentHTML('beforeend', renderSubscribed(feedId));
        await this.route();
      } catch (error) {
        this.root.insertAdjacentHTML('beforeend', renderErrorBanner(error));
      }
    }
  }
}

export function mount() {
  const root = document.getElementById('app');
  const keyInput = document.getElementById('key') as HTMLInputElement | null;
  const keyButton = document.getElementById('use-key');
  if (!root) throw new Error('missing #app element');
  const hubUrl = (window as { HUB_URL?: string }).HUB_URL ?? '';
  const app = new PortalApp(new PortalSession(hubUrl), root);
  if (keyInput && keyButton) {
    keyButton.addEventListener('click', () => app.useKey(keyInput.value));
  }
  app.start();
  return app;
}
