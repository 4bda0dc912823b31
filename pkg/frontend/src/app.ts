// Browser entry point: adapts fetch to the injected transports, wires DOM
// events to controller actions, and re-renders the workbench on every
// workspace change. All logic lives in the imported modules; this file is
// plumbing only.

import { ServiceClient, type HttpCall } from "./api/client";
import type { StreamOpener } from "./api/sse";
import { WorkbenchController, DEFAULT_GROUP_SIZE } from "./state/controller";
import { Workspace } from "./state/workspace";
import { renderWorkbench } from "./ui/components";

function browserHttp(): HttpCall {
  return async (url, init) => {
    const reply = await fetch(url, {
      method: init.method,
      headers: init.headers,
      body: init.body,
    });
    return { status: reply.status, body: await reply.text() };
  };
}

function browserStream(baseUrl: string): StreamOpener {
  return async function* (runId: string) {
    const reply = await fetch(`${baseUrl}/api/runs/${runId}/events`);
    if (!reply.ok || !reply.body) {
      throw new Error(`event stream for ${runId} failed with HTTP ${reply.status}`);
    }
    const reader = reply.body.getReader();
    const decoder = new TextDecoder();
    while (true) {
      const { done, value } = await reader.read();
      if (done) break;
      yield decoder.decode(value, { stream: true });
    }
  };
}

function main(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";

  const workspace = new Workspace();
  const controller = new WorkbenchController({
    client: new ServiceClient(baseUrl, browserHttp()),
    openEvents: browserStream(baseUrl),
    workspace,
  });

  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");

  const render = () => {
    root.innerHTML = renderWorkbench(workspace.state);
  };
  workspace.subscribe(render);
  render();

  const intakeForm = document.getElementById("intake-form") as HTMLFormElement | null;
  intakeForm?.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = new FormData(intakeForm);
    void controller.intake(
      {
        title: String(data.get("title") ?? ""),
        body: String(data.get("manuscript") ?? ""),
      },
      String(data.get("review") ?? ""),
    );
  });

  root.addEventListener("click", (ev) => {
    const target = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset["action"];
    if (action === "draft") {
      void controller.draft(target.dataset["comment"] ?? "");
    } else if (action === "regenerate") {
      const input = root.querySelector<HTMLInputElement>('input[data-field="group-size"]');
      const size = input ? Number(input.value) : DEFAULT_GROUP_SIZE;
      void controller.regenerate(Number.isFinite(size) && size >= 1 ? size : DEFAULT_GROUP_SIZE);
    } else if (action === "pick") {
      void controller.pick(target.dataset["run"] ?? "", Number(target.dataset["index"]));
    } else if (action === "add-step") {
      workspace.addStrategyStep();
    } else if (action === "remove-step") {
      workspace.removeStrategyStep(Number(target.dataset["step"]));
    } else if (action === "copy-response") {
      const text = workspace.state.responseText ?? "";
      void navigator.clipboard.writeText(text);
    } else if (action === "retry") {
      const retry = workspace.state.error?.retry;
      workspace.clearError();
      retry?.();
    }
  });

  // keep typing smooth: sync silently on input, re-render on blur/change
  root.addEventListener("input", (ev) => {
    const target = ev.target as HTMLElement;
    if (target.matches('textarea[data-action="edit-step"]')) {
      const step = Number(target.dataset["step"]);
      workspace.editStrategyStep(step, (target as HTMLTextAreaElement).value, false);
    }
  });
  root.addEventListener("change", (ev) => {
    const target = ev.target as HTMLElement;
    if (target.matches('textarea[data-action="edit-step"]')) {
      const step = Number(target.dataset["step"]);
      workspace.editStrategyStep(step, (target as HTMLTextAreaElement).value, true);
    }
  });

  void controller.connect().then(() => controller.restore());
}

main();
