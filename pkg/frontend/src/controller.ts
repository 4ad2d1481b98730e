import { EngineApi } from "./api.js";
import {
  HintResponse,
  MoveDto,
  MoveRejected,
  RuleToggles,
  SessionState,
} from "./types.js";

export interface ViewState {
  fen: string;
  mover: string;
  forced: boolean;
  legal: MoveDto[];
  selected: string | null;
  highlights: string[];
  flashed: MoveDto[]; // the forced set shown after a refused move
  message: string | null;
  terminal: string | null;
  moveLog: string[];
  hint: string | null;
}

export interface BoardView {
  render(state: ViewState): void;
}

/** Glue between clicks and the engine API.
 *
 * The controller never derives legality locally: highlighted destinations
 * are exactly the API's legal-move list, state is re-fetched after every
 * accepted move, and rejection reasons are surfaced verbatim. */
export class GameController {
  private session: SessionState | null = null;
  private selected: string | null = null;
  private message: string | null = null;
  private flashed: MoveDto[] = [];
  private hintText: string | null = null;

  constructor(private readonly api: EngineApi, private readonly view: BoardView) {}

  async newSession(fen?: string, config?: RuleToggles): Promise<void> {
    this.session = await this.api.createSession(fen, config);
    this.selected = null;
    this.message = null;
    this.flashed = [];
    this.hintText = null;
    this.publish();
  }

  get state(): ViewState {
    return this.snapshot();
  }

  fen(): string {
    return this.require().fen;
  }

  moveLog(): string[] {
    return [...this.require().moves_played];
  }

  legalFrom(square: string): MoveDto[] {
    return this.require().legal_moves.filter((m) => m.from === square);
  }

  async clickSquare(square: string): Promise<void> {
    const session = this.require();
    if (session.terminal) return;
    this.message = null;
    this.hintText = null;
    if (this.selected === null) {
      if (this.legalFrom(square).length > 0) {
        this.selected = square;
      }
      // clicking anything unselectable with no selection is a no-op
      this.publish();
      return;
    }
    if (square === this.selected) {
      this.selected = null;
      this.publish();
      return;
    }
    const targets = this.legalFrom(this.selected).map((m) => m.to);
    if (targets.includes(square)) {
      await this.submitMove(this.selected, square);
      return;
    }
    this.selected = this.legalFrom(square).length > 0 ? square : null;
    this.publish();
  }

  /** Post a move exactly as given; rejections become on-screen messages and
   * the refused turn's forced set is flashed. */
  async submitMove(from: string, to: string): Promise<boolean> {
    const session = this.require();
    try {
      const after = await this.api.move(session.session, from, to);
      this.session = after;
      this.selected = null;
      this.flashed = [];
      this.message = after.result.captures.length
        ? `captured ${after.result.captures.join(", ")}`
        : null;
      // never trust the optimistic response shape: re-fetch the state
      this.session = await this.api.getState(session.session);
      this.publish();
      return true;
    } catch (err) {
      if (err instanceof MoveRejected) {
        this.message = err.reason;
        this.flashed = session.forced ? [...session.legal_moves] : [];
        this.publish();
        return false;
      }
      throw err;
    }
  }

  async requestHint(plies = 4): Promise<HintResponse> {
    const session = this.require();
    const hint = await this.api.hint(session.session, plies);
    this.hintText = hint.move
      ? `${hint.move} (${hint.verdict}${hint.plies ? ` in ${hint.plies}` : ""})`
      : hint.verdict;
    this.publish();
    return hint;
  }

  lastMessage(): string | null {
    return this.message;
  }

  private require(): SessionState {
    if (this.session === null) throw new Error("no active session");
    return this.session;
  }

  private snapshot(): ViewState {
    const session = this.require();
    return {
      fen: session.fen,
      mover: session.mover,
      forced: session.forced,
      legal: session.legal_moves,
      selected: this.selected,
      highlights: this.selected
        ? this.legalFrom(this.selected).map((m) => m.to)
        : [],
      flashed: this.flashed,
      message: this.message,
      terminal: session.terminal,
      moveLog: [...session.moves_played],
      hint: this.hintText,
    };
  }

  private publish(): void {
    this.view.render(this.snapshot());
  }
}
