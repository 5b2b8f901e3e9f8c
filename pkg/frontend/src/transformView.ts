import { ApiError } from './api';
import { TRANSFORM_KINDS, type EngineApi, type TransformKind } from './types';

/**
 * Side-by-side report rewriting: the original text on the left, the
 * requested rendering on the right. Both panes hold verbatim API text.
 */
export class TransformView {
  private readonly reportInput: HTMLInputElement;
  private readonly kindSelect: HTMLSelectElement;
  private readonly banner: HTMLElement;
  private readonly originalPane: HTMLElement;
  private readonly transformedPane: HTMLElement;

  constructor(
    root: HTMLElement,
    private readonly api: EngineApi
  ) {
    root.innerHTML = '';

    const form = document.createElement('form');
    form.dataset.role = 'transform-form';
    this.reportInput = document.createElement('input');
    this.reportInput.dataset.role = 'transform-report-id';
    this.reportInput.placeholder = 'report id, e.g. R0003';
    this.kindSelect = document.createElement('select');
    this.kindSelect.dataset.role = 'transform-kind';
    for (const kind of TRANSFORM_KINDS) {
      const option = document.createElement('option');
      option.value = kind;
      option.textContent = kind;
      this.kindSelect.append(option);
    }
    const button = document.createElement('button');
    button.type = 'submit';
    button.textContent = 'Transform';
    form.append(this.reportInput, this.kindSelect, button);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.run(this.reportInput.value.trim(), this.kindSelect.value as TransformKind);
    });

    this.banner = document.createElement('div');
    this.banner.dataset.role = 'transform-banner';
    this.banner.hidden = true;

    const panes = document.createElement('div');
    panes.dataset.role = 'transform-panes';
    this.originalPane = document.createElement('pre');
    this.originalPane.dataset.role = 'original-text';
    this.transformedPane = document.createElement('pre');
    this.transformedPane.dataset.role = 'transformed-text';
    panes.append(this.originalPane, this.transformedPane);

    root.append(form, this.banner, panes);
  }

  async run(reportId: string, kind: TransformKind): Promise<void> {
    if (!reportId) {
      this.showBanner('enter a report id');
      return;
    }
    this.hideBanner();
    try {
      const [report, transformed] = await Promise.all([
        this.api.getReport(reportId),
        this.api.transform(reportId, kind),
      ]);
      this.originalPane.textContent = report.text;
      this.transformedPane.textContent = transformed.text;
    } catch (err) {
      const message =
        err instanceof ApiError
          ? `${err.code}: ${err.message}`
          : err instanceof Error
            ? err.message
            : 'request failed';
      this.showBanner(message);
    }
  }

  private showBanner(message: string): void {
    this.banner.hidden = false;
    this.banner.textContent = message;
  }

  private hideBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = '';
  }
}
