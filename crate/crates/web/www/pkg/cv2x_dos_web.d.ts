/* tslint:disable */
/* eslint-disable */

/**
 * Resource-block occupancy of one trial, one byte per (slot, block).
 */
export class Trace {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major by slot; see the `CELL_*` codes.
     */
    cells(): Uint8Array;
    readonly n_rb: number;
    readonly prr: number;
    readonly slots: number;
}

/**
 * Stationary jamming probability and its slope at `points` evenly spaced attacker switching probabilities in [0, 1].
 * Returned flat as `[p', pi1, dpi1/dp', ...]`.
 */
export function pi1_curve(p: number, n_rb: number, points: number): Float64Array;

/**
 * Mean PRR at each total vehicle count, attackers held fixed.
 */
export function prr_curve(attack: string, n_rb: number, n_attackers: number, deniable: boolean, totals: Uint32Array, slots: number, trials: number, seed: bigint): Float64Array;

/**
 * Runs one trial and classifies every block in every slot.
 */
export function utilization_trace(attack: string, n_rb: number, n_targets: number, n_attackers: number, deniable: boolean, slots: number, seed: bigint): Trace;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_trace_free: (a: number, b: number) => void;
    readonly pi1_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly prr_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number, number];
    readonly trace_cells: (a: number) => [number, number];
    readonly trace_n_rb: (a: number) => number;
    readonly trace_prr: (a: number) => number;
    readonly trace_slots: (a: number) => number;
    readonly utilization_trace: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
