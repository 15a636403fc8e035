/** Bootstrap: one store, one API client, render into #app, poll status. */

import {ApiClient} from "./api.js";
import {AppStore} from "./state.js";
import {renderApp} from "./views.js";

const POLL_INTERVAL_MS = 1000;

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}
const store = new AppStore(new ApiClient(""));
renderApp(root, store);
store.startPolling(POLL_INTERVAL_MS);
