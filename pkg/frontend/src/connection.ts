/**
 * Persistent snapshot stream: one websocket, automatic reconnect with
 * backoff, monotonic cycle filtering delegated to the model fold.
 */

import type { Frame } from "./types.js";

export interface StreamCallbacks {
  onFrame: (frame: Frame) => void;
  onState: (state: "connecting" | "open" | "closed") => void;
}

export class StreamClient {
  private url: string;
  private callbacks: StreamCallbacks;
  private ws: WebSocket | null = null;
  private backoff = 250;
  private closed = false;

  constructor(url: string, callbacks: StreamCallbacks) {
    this.url = url;
    this.callbacks = callbacks;
  }

  start(): void {
    this.closed = false;
    this.connect();
  }

  stop(): void {
    this.closed = true;
    this.ws?.close();
  }

  private connect(): void {
    this.callbacks.onState("connecting");
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.backoff = 250;
      this.callbacks.onState("open");
    };
    ws.onmessage = (msg) => {
      try {
        const frame = JSON.parse(String(msg.data)) as Frame;
        if (frame && (frame.type === "hello" || frame.type === "snapshot")) {
          this.callbacks.onFrame(frame);
        }
      } catch {
        // a malformed frame is dropped, never crashes the stream
      }
    };
    ws.onclose = () => {
      this.callbacks.onState("closed");
      if (!this.closed) {
        setTimeout(() => this.connect(), this.backoff);
        this.backoff = Math.min(this.backoff * 2, 4000);
      }
    };
    ws.onerror = () => ws.close();
  }
}
