import { EngineApi } from "./api.js";
import { DomBoardView } from "./board.js";
import { GameController } from "./controller.js";
import { RuleToggles } from "./types.js";

const DEFAULT_PORT = 8024;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function currentToggles(): RuleToggles {
  return {
    forced_capture: el<HTMLInputElement>("opt-forced").checked,
    traps: el<HTMLInputElement>("opt-traps").checked,
    throne_is_anvil: el<HTMLInputElement>("opt-anvil").checked,
    king_protected_on_throne: el<HTMLInputElement>("opt-protected").checked,
    edge_escape: el<HTMLInputElement>("opt-edge").checked,
  };
}

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const port = params.get("port") ?? String(DEFAULT_PORT);
  const api = new EngineApi(`http://127.0.0.1:${port}`);

  const fenBox = el<HTMLTextAreaElement>("fen-box");
  const controller = new GameController(
    api,
    new DomBoardView(el("board"), el("status"), (square) => {
      controller.clickSquare(square).catch(showError);
    }),
  );

  const showError = (err: unknown) => {
    el("status").textContent = err instanceof Error ? err.message : String(err);
  };

  const fresh = async (fen?: string) => {
    // variant changes always begin a new session; rules never mutate mid-game
    await controller.newSession(fen, currentToggles());
    fenBox.value = controller.fen();
  };

  el<HTMLButtonElement>("new-game").addEventListener("click", () => {
    fresh().catch(showError);
  });
  el<HTMLButtonElement>("load-fen").addEventListener("click", () => {
    fresh(fenBox.value.trim() || undefined).catch(showError);
  });
  el<HTMLButtonElement>("copy-fen").addEventListener("click", () => {
    fenBox.value = controller.fen();
  });
  el<HTMLButtonElement>("hint").addEventListener("click", () => {
    controller.requestHint(4).catch(showError);
  });

  await fresh();
}

start().catch((err) => {
  const status = document.getElementById("status");
  if (status) {
    status.textContent = `cannot reach the engine API: ${err}. ` +
      "Start it with: fctafl serve";
  }
});
