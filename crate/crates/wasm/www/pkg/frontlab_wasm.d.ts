/* tslint:disable */
/* eslint-disable */

export class Run {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    h(): Float64Array;
    t(): Float64Array;
    u(): Float64Array;
    /**
     * Final profile on the full support.
     */
    x(): Float64Array;
    readonly verdict: string;
}

export class SemiWave {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    q(): Float64Array;
    z(): Float64Array;
    readonly c_star: number;
}

export function semiwave(kind: string, param: number, mu: number): SemiWave;

/**
 * Cos-bump σ cos(πx/2h0) run to `t_end` (or an earlier verdict).
 */
export function simulate(kind: string, param: number, sigma: number, h0: number, mu: number, t_end: number): Run;

/**
 * Root of 2ξ e^{ξ²} ∫₀^ξ e^{-s²} ds = μθ.
 */
export function xi0(mu: number, theta: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_run_free: (a: number, b: number) => void;
    readonly __wbg_semiwave_free: (a: number, b: number) => void;
    readonly run_h: (a: number) => [number, number];
    readonly run_t: (a: number) => [number, number];
    readonly run_u: (a: number) => [number, number];
    readonly run_verdict: (a: number) => [number, number];
    readonly run_x: (a: number) => [number, number];
    readonly semiwave: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly semiwave_c_star: (a: number) => number;
    readonly semiwave_q: (a: number) => [number, number];
    readonly semiwave_z: (a: number) => [number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly xi0: (a: number, b: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
