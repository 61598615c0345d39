import { ApiClient } from "./api.js";
import { App, type AppElements } from "./app.js";

function required<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const elements: AppElements = {
  offline: required("offline"),
  profile: required("profile"),
  controls: required("controls"),
  verdict: required("verdict"),
  mitigations: required("mitigations"),
  undo: required<HTMLButtonElement>("undo"),
};

// same origin when served by `riskgate serve --ui`
const app = new App(new ApiClient(""), elements);
void app.init();
