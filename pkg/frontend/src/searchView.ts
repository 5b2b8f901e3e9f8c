import { ApiError } from './api';
import { barBounds, barFraction, formatScore } from './format';
import type { EngineApi, ReportPayload, SearchHit, SearchResponse } from './types';

const SCORE_COMPONENTS = ['s_doc', 's_chunk', 's_bm25', 'fused'] as const;

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.code}: ${err.message}`;
  }
  return err instanceof Error ? err.message : 'request failed';
}

/**
 * Search box, ranked hit list with per-component score bars, and a report
 * pane. Hits render in the order the API returned them; every number on
 * screen is copied from the payload (bar widths are layout scaling only).
 * Only the latest submitted search may render: stale responses are dropped.
 */
export class SearchView {
  private readonly input: HTMLInputElement;
  private readonly banner: HTMLElement;
  private readonly answerPane: HTMLElement;
  private readonly results: HTMLElement;
  private readonly reportPane: HTMLElement;
  private requestToken = 0;

  constructor(
    root: HTMLElement,
    private readonly api: EngineApi
  ) {
    root.innerHTML = '';

    const form = document.createElement('form');
    form.dataset.role = 'search-form';
    this.input = document.createElement('input');
    this.input.type = 'search';
    this.input.dataset.role = 'search-input';
    this.input.placeholder = 'semantic or keyword query';
    const button = document.createElement('button');
    button.type = 'submit';
    button.textContent = 'Search';
    form.append(this.input, button);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submit(this.input.value);
    });

    this.banner = document.createElement('div');
    this.banner.dataset.role = 'search-banner';
    this.banner.hidden = true;

    this.answerPane = document.createElement('p');
    this.answerPane.dataset.role = 'answer';
    this.answerPane.hidden = true;

    this.results = document.createElement('div');
    this.results.dataset.role = 'search-results';

    this.reportPane = document.createElement('div');
    this.reportPane.dataset.role = 'report-pane';
    this.reportPane.hidden = true;

    root.append(form, this.banner, this.answerPane, this.results, this.reportPane);
  }

  /** Run a search; on failure the query stays in the box for refinement. */
  async submit(query: string): Promise<void> {
    this.input.value = query;
    const token = ++this.requestToken;
    this.hideBanner();
    let response: SearchResponse;
    try {
      response = await this.api.search(query);
    } catch (err) {
      if (token === this.requestToken) {
        this.showBanner(describeError(err), 'error');
      }
      return;
    }
    if (token !== this.requestToken) {
      return; // a newer search is in flight; this result is stale
    }
    this.render(response);
  }

  render(response: SearchResponse): void {
    if (!response || !Array.isArray(response.hits)) {
      this.showBanner('malformed response from /v1/search', 'error');
      return;
    }
    if (response.warning) {
      this.showBanner(response.warning, 'warning');
    }
    this.answerPane.hidden = !response.answer;
    this.answerPane.textContent = response.answer ?? '';

    this.results.innerHTML = '';
    const bounds = barBounds(response.hits);
    for (const hit of response.hits) {
      this.results.append(this.buildRow(hit, bounds));
    }
  }

  private buildRow(hit: SearchHit, bounds: [number, number]): HTMLElement {
    const row = document.createElement('article');
    row.dataset.role = 'hit';
    row.dataset.reportId = hit.report_id;

    const header = document.createElement('header');
    const title = document.createElement('span');
    title.dataset.role = 'hit-report-id';
    title.textContent = hit.report_id;
    const fused = document.createElement('span');
    fused.dataset.role = 'fused';
    fused.textContent = formatScore(hit.fused);
    header.append(title, fused);
    row.append(header);

    for (const component of SCORE_COMPONENTS) {
      const line = document.createElement('div');
      line.dataset.role = `score-line-${component}`;
      const label = document.createElement('span');
      label.textContent = component;
      const value = document.createElement('span');
      value.dataset.role = `score-${component}`;
      value.textContent = formatScore(hit[component]);
      const bar = document.createElement('div');
      bar.dataset.role = `bar-${component}`;
      bar.style.width = `${(barFraction(hit[component], bounds) * 100).toFixed(1)}%`;
      line.append(label, value, bar);
      row.append(line);
    }

    const snippet = document.createElement('p');
    snippet.dataset.role = 'snippet';
    snippet.textContent = hit.best_chunk_section
      ? `[${hit.best_chunk_section}] ${hit.snippet}`
      : hit.snippet;
    row.append(snippet);

    row.addEventListener('click', () => {
      void this.openReport(hit);
    });
    return row;
  }

  async openReport(hit: SearchHit): Promise<void> {
    let report: ReportPayload;
    try {
      report = await this.api.getReport(hit.report_id);
    } catch (err) {
      this.showBanner(describeError(err), 'error');
      return;
    }
    this.renderReport(report, hit);
  }

  private renderReport(report: ReportPayload, hit: SearchHit): void {
    this.reportPane.innerHTML = '';
    this.reportPane.hidden = false;

    const heading = document.createElement('h2');
    heading.textContent = report.report_id;
    this.reportPane.append(heading);

    for (const section of report.sections) {
      const block = document.createElement('section');
      block.dataset.role = 'report-section';
      block.dataset.label = section.label;

      const label = document.createElement('h3');
      label.textContent = section.label;
      block.append(label);

      const body = document.createElement('p');
      const isBest =
        hit.best_chunk_id !== null && section.label === hit.best_chunk_section;
      if (isBest) {
        block.classList.add('best-chunk-section');
        appendWithHighlight(body, section.text, hit.snippet);
      } else {
        body.textContent = section.text;
      }
      block.append(body);
      this.reportPane.append(block);
    }
  }

  private showBanner(message: string, kind: 'error' | 'warning'): void {
    this.banner.hidden = false;
    this.banner.dataset.kind = kind;
    this.banner.textContent = message;
  }

  private hideBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = '';
  }
}

/**
 * Mark the best chunk inside its section. The snippet is the chunk's first
 * 200 characters; when it does not occur verbatim (whitespace reflow), the
 * section-level highlight class still flags the region.
 */
function appendWithHighlight(target: HTMLElement, text: string, snippet: string): void {
  const needle = snippet.trim();
  const at = needle ? text.indexOf(needle) : -1;
  if (at < 0) {
    target.textContent = text;
    return;
  }
  target.append(document.createTextNode(text.slice(0, at)));
  const mark = document.createElement('mark');
  mark.dataset.role = 'chunk-highlight';
  mark.textContent = text.slice(at, at + needle.length);
  target.append(mark, document.createTextNode(text.slice(at + needle.length)));
}
