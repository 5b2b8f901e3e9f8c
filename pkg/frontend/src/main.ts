import { ApiClient } from './api';
import { CohortPanel } from './cohortPanel';
import { SearchView } from './searchView';
import { TransformView } from './transformView';

function mount(): void {
  const api = new ApiClient();
  const searchRoot = document.getElementById('search');
  const cohortRoot = document.getElementById('cohorts');
  const transformRoot = document.getElementById('transform');
  if (!searchRoot || !cohortRoot || !transformRoot) {
    throw new Error('console shell is missing a mount point');
  }
  new SearchView(searchRoot, api);
  const panel = new CohortPanel(cohortRoot, api, {
    storage: window.localStorage,
  });
  panel.init(); // reattach to a job that survived a reload
  new TransformView(transformRoot, api);
}

document.addEventListener('DOMContentLoaded', mount);
