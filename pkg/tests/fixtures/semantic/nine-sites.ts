import { Component, DestroyRef, Directive, OnDestroy, OnInit, inject } from '@angular/core';
import { takeUntilDestroyed } from '@angular/core/rxjs-interop';
import { Subject, Subscription, interval, of } from 'rxjs';
import { first, map, take, takeUntil } from 'rxjs/operators';
import { Base } from './base';

// `// site: <status>` marks the line where a subscribe call expression starts.

@Component({ selector: 'app-one', template: '' })
export class OneComponent implements OnInit {
  data$ = interval(1000);
  value = 0;

  ngOnInit() {
    // site: none
    this.data$.subscribe(v => this.value = v);
    // site: covered
    this.data$.pipe(takeUntilDestroyed()).subscribe();
  }
}

@Component({ selector: 'app-two', template: '' })
export class TwoComponent implements OnInit, OnDestroy {
  private destroy$ = new Subject<void>();
  private sub = new Subscription();
  private handle?: Subscription;

  ngOnInit() {
    // site: legacy_covered
    interval(10).pipe(map(n => n + 1), takeUntil(this.destroy$)).subscribe();
    // site: legacy_covered
    this.handle = of(1).subscribe();
  }

  ngOnDestroy() {
    this.destroy$.next();
    this.destroy$.complete();
    this.handle?.unsubscribe();
  }
}

@Directive({ selector: '[appThree]' })
export class ThreeDirective {
  private destroyRef = inject(DestroyRef);

  constructor() {
    // site: bounded
    of(1, 2).pipe(take(1)).subscribe();
    // site: bounded
    interval(5).pipe(first()).subscribe();
    // site: covered
    const poll = interval(100).subscribe();
    this.destroyRef.onDestroy(() => poll.unsubscribe());
  }
}

@Component({ selector: 'app-four', template: '' })
export class FourComponent extends Base {
  start() {
    // site: unknown
    interval(1).subscribe();
  }
}

export class FiveHelper {
  run() {
    // site: none
    of(1).subscribe({ next: x => console.log(x), error: () => undefined });
  }
}
