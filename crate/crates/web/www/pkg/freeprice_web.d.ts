/* tslint:disable */
/* eslint-disable */

export class Panel {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly summary: string;
    readonly svg: string;
}

/**
 * Price trajectory for a run of length `t_end` from the default perturbation.
 */
export function run(r: number, phi: string, t_end: number): Panel;

/**
 * Crossing curves up to `a_max` and the stability picture at coupling `r`.
 */
export function spectrum(r: number, a_max: number): Panel;

/**
 * Traveling wave with speed `c` and amplitude `rho`.
 */
export function wave(c: number, rho: number, phi: string): Panel;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_panel_free: (a: number, b: number) => void;
    readonly panel_summary: (a: number) => [number, number];
    readonly panel_svg: (a: number) => [number, number];
    readonly run: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly spectrum: (a: number, b: number) => [number, number, number];
    readonly wave: (a: number, b: number, c: number, d: number) => [number, number, number];
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
