import type {
  IdsPayload,
  ProfilePayload,
  ScenarioDocument,
  SweepCurve,
  WhatIfResult,
} from './types.js';

export class ApiError extends Error {
  constructor(
    message: string,
    readonly code: string,
    readonly status: number,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = (await resp.json()) as { error?: string; message?: string };
    return new ApiError(
      body.message ?? resp.statusText,
      body.error ?? 'HttpError',
      resp.status,
    );
  } catch {
    return new ApiError(resp.statusText, 'HttpError', resp.status);
  }
}

export class ApiClient {
  constructor(private readonly base: string = '') {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(this.base + path);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  getProfile(): Promise<ProfilePayload> {
    return this.get('/api/profile');
  }

  getIds(): Promise<IdsPayload> {
    return this.get('/api/ids');
  }

  postWhatIf(scenario: ScenarioDocument, signal?: AbortSignal): Promise<WhatIfResult> {
    return this.post('/api/whatif', scenario, signal);
  }

  postSweep(target: string, grid?: number[], signal?: AbortSignal): Promise<SweepCurve> {
    const body: { target: string; grid?: number[] } = { target };
    if (grid) body.grid = grid;
    return this.post('/api/sweep', body, signal);
  }
}
