/**
 * Portal session state. The entered API key lives in memory only. It is
 * never written to localStorage, sessionStorage, or cookies, so closing
 * the tab forgets it.
 */
export class PortalSession {
  private key?: string;

  constructor(public hubUrl: string) {}

  enterKey(key: string) {
    this.key = key.trim() || undefined;
  }

  clearKey() {
    this.key = undefined;
  }

  get enteredKey(): string | undefined {
    return this.key;
  }

  get hasKey(): boolean {
    return this.key !== undefined;
  }
}
