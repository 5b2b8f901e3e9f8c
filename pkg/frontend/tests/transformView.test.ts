import { beforeEach, describe, expect, it } from 'vitest';

import { ApiError } from '../src/api';
import { TransformView } from '../src/transformView';
import { FakeApi, makeReport } from './fakeApi';

let root: HTMLElement;
let api: FakeApi;
let view: TransformView;

beforeEach(() => {
  document.body.innerHTML = '<div id="root"></div>';
  root = document.getElementById('root') as HTMLElement;
  api = new FakeApi();
  view = new TransformView(root, api);
});

function pane(role: string): HTMLElement {
  return root.querySelector(`[data-role="${role}"]`) as HTMLElement;
}

describe('TransformView', () => {
  it('renders the original and the rewritten text side by side', async () => {
    const report = makeReport({ report_id: 'R0001' });
    api.reports.set('R0001', report);

    await view.run('R0001', 'patient_friendly');

    expect(pane('original-text').textContent).toBe(report.text);
    expect(pane('transformed-text').textContent).toBe(
      'patient_friendly rendering of R0001'
    );
    expect(api.transformCalls).toEqual([
      { reportId: 'R0001', kind: 'patient_friendly' },
    ]);
  });

  it('offers every rendering kind in the selector', () => {
    const options = Array.from(
      root.querySelectorAll('[data-role="transform-kind"] option')
    ).map((el) => (el as HTMLOptionElement).value);
    expect(options).toEqual([
      'synoptic',
      'clinical_summary',
      'oncologist',
      'tumor_board',
      'patient_friendly',
    ]);
  });

  it('runs from the form submit handler', async () => {
    api.reports.set('R0001', makeReport({ report_id: 'R0001' }));
    (pane('transform-report-id') as HTMLInputElement).value = 'R0001';
    const form = root.querySelector('[data-role="transform-form"]') as HTMLFormElement;
    form.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(api.transformCalls).toHaveLength(1);
    expect(api.transformCalls[0].kind).toBe('synoptic');
  });

  it('shows the error envelope for an unknown report', async () => {
    await view.run('R9999', 'synoptic');
    const banner = pane('transform-banner');
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toBe('not_found: unknown report_id {R9999}');
  });

  it('shows the rejection for an unknown rendering kind', async () => {
    api.reports.set('R0001', makeReport({ report_id: 'R0001' }));
    api.transformError = new ApiError(422, 'invalid_request', 'unknown transform kind');
    await view.run('R0001', 'synoptic');
    const banner = pane('transform-banner');
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toBe('invalid_request: unknown transform kind');
  });

  it('rejects a blank report id locally', async () => {
    await view.run('', 'synoptic');
    expect(pane('transform-banner').hidden).toBe(false);
    expect(api.reportCalls).toHaveLength(0);
    expect(api.transformCalls).toHaveLength(0);
  });
});
