export interface MoveDto {
  from: string;
  to: string;
}

export interface SessionState {
  session: string;
  fen: string;
  mover: "attacker" | "defender";
  forced: boolean;
  legal_moves: MoveDto[];
  terminal: string | null;
  moves_played: string[];
  config: Record<string, unknown>;
}

export interface MoveResponse extends SessionState {
  result: { captures: string[]; terminal: string | null };
}

export interface HintResponse {
  verdict: string;
  plies: number | null;
  line: string[];
  move: string | null;
}

export interface ApiError {
  error: string;
  detail?: string;
}

export class MoveRejected extends Error {
  readonly reason: string;

  constructor(reason: string, detail?: string) {
    super(detail ?? reason);
    this.reason = reason;
  }
}

export interface RuleToggles {
  forced_capture?: boolean;
  traps?: boolean;
  king_protected_on_throne?: boolean;
  throne_is_anvil?: boolean;
  edge_escape?: boolean;
  throne_access?: string;
}
