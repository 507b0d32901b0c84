// Connection lifecycle: handshake (ping/pong + version check), the state
// stream, throttled command sending, and auto-reconnect with backoff.
// Rendering never blocks the socket: incoming states just replace
// `latestState` and the animation loop picks them up.

import { CmdMsg, ErrMsg, PingMsg, PROTOCOL_VERSION, StateMsg, decode, encode } from "./protocol.js";

export type SessionStatus = "connecting" | "live" | "version-mismatch" | "closed";

const SEND_INTERVAL_MS = 1000 / 30; // command throttle: <= 30 msgs/s
const BACKOFF_BASE_MS = 500;
const BACKOFF_MAX_MS = 5000;

export interface SessionEvents {
  onState?: (state: StateMsg) => void;
  onStatus?: (status: SessionStatus, detail?: string) => void;
  onServerError?: (err: ErrMsg) => void;
}

export class UiSession {
  status: SessionStatus = "connecting";
  latestState: StateMsg | null = null;
  previousState: StateMsg | null = null;
  latestStateAt = 0; // Date.now() of the newest snapshot, for interpolation
  trail: [number, number][] = [];

  private ws: WebSocket | null = null;
  private seq = 0;
  private pending: CmdMsg | null = null;
  private lastSent = 0;
  private sendTimer: ReturnType<typeof setInterval> | null = null;
  private retries = 0;
  private stopped = false;

  constructor(readonly url: string, private events: SessionEvents = {},
              private socketFactory: (url: string) => WebSocket = (u) => new WebSocket(u)) {}

  connect(): void {
    this.stopped = false;
    this.open();
  }

  private open(): void {
    this.setStatus("connecting");
    const ws = this.socketFactory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retries = 0;
      const ping: PingMsg = { type: "ping", version: PROTOCOL_VERSION, seq: this.nextSeq() };
      ws.send(encode(ping));
    };
    ws.onmessage = (event: MessageEvent) => {
      let msg;
      try {
        msg = decode(String(event.data));
      } catch (err) {
        // wrong protocol version: show the banner and do not send commands
        this.setStatus("version-mismatch", String(err));
        ws.close();
        return;
      }
      if (!msg) return;
      if (msg.type === "pong") {
        this.setStatus("live");
      } else if (msg.type === "state") {
        if (this.status === "connecting") this.setStatus("live");
        this.previousState = this.latestState;
        this.latestState = msg;
        this.latestStateAt = Date.now();
        const [x, y] = msg.odometry;
        const last = this.trail[this.trail.length - 1];
        if (!last || Math.hypot(last[0] - x, last[1] - y) > 0.005) {
          this.trail.push([x, y]);
          if (this.trail.length > 2000) this.trail.shift();
        }
        this.events.onState?.(msg);
      } else if (msg.type === "error") {
        console.error("server error:", msg.message);
        this.events.onServerError?.(msg);
      }
    };
    ws.onclose = () => {
      if (this.stopped || this.status === "version-mismatch") {
        if (!this.stopped) return; // keep the banner up, no reconnect
        this.setStatus("closed");
        return;
      }
      const delay = Math.min(BACKOFF_BASE_MS * 2 ** this.retries, BACKOFF_MAX_MS);
      this.retries += 1;
      this.setStatus("connecting", `reconnecting in ${delay} ms`);
      setTimeout(() => {
        if (!this.stopped) this.open();
      }, delay);
    };
    ws.onerror = () => {
      // onclose follows and handles the retry
    };
  }

  /** Queue a command; the throttle sends the freshest one (latest wins). */
  send(cmd: CmdMsg): void {
    if (this.status === "version-mismatch") return;
    this.pending = cmd;
    if (this.sendTimer === null) {
      this.flush();
      this.sendTimer = setInterval(() => this.flush(), SEND_INTERVAL_MS / 2);
    }
  }

  private flush(): void {
    if (!this.pending || !this.ws || this.ws.readyState !== 1 /* OPEN */) return;
    const now = Date.now();
    if (now - this.lastSent < SEND_INTERVAL_MS) return;
    this.pending = { ...this.pending, seq: this.nextSeq() };
    this.ws.send(encode(this.pending));
    this.lastSent = now;
    this.pending = null;
  }

  nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  close(): void {
    this.stopped = true;
    if (this.sendTimer !== null) clearInterval(this.sendTimer);
    this.sendTimer = null;
    this.ws?.close();
    this.setStatus("closed");
  }

  private setStatus(status: SessionStatus, detail?: string): void {
    this.status = status;
    this.events.onStatus?.(status, detail);
  }
}
