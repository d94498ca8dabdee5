import { Component, Input, computed, inject, input, model, signal } from '@angular/core';
import { toObservable, toSignal } from '@angular/core/rxjs-interop';
import { HttpClient } from '@angular/common/http';
import { BehaviorSubject, Observable, ReplaySubject, Subject, Subscription, interval, of } from 'rxjs';
import { map } from 'rxjs/operators';

// Each field is preceded by its hand classification: `// class: <kind> <evidence,...>`.
// Evidence is listed only for fields classified as observable.
@Component({ selector: 'app-thirty', template: '' })
export class ThirtyFieldsComponent {
  // class: other
  private http = inject(HttpClient);
  // class: signal
  count = signal(0);
  // class: other
  x: number = 3;
  // class: observable dollar_suffix,initializer_call
  items$ = this.http.get('/api/items');
  // class: computed_signal
  double = computed(() => this.count() * 2);
  // class: behavior_subject
  price$ = new BehaviorSubject(1);
  // class: subject
  refresh$ = new Subject<void>();
  // class: subject
  history = new ReplaySubject<string>(5);
  // class: observable dollar_suffix,initializer_call
  total$ = this.price$.pipe(map(p => p * 2));
  // class: observable initializer_call
  countChanges = toObservable(this.count);
  // class: observable type_annotation
  stream: Observable<number>;
  // class: observable dollar_suffix,initializer_call,type_annotation
  typed$: Observable<string> = of('a');
  // class: subscription_handle
  sub: Subscription;
  // class: subscription_handle
  private pollSub?: Subscription;
  // class: observable dollar_suffix
  pending$;
  // class: other
  label = 'hello';
  // class: other
  flags = { open: false };
  // class: observable initializer_call
  ticks = interval(1000);
  // class: observable dollar_suffix,initializer_call
  names$ = of('a', 'b');
  // class: signal
  name = input<string>();
  // class: signal
  value = model(0);
  // class: signal
  fromStream = toSignal(this.items$);
  // class: behavior_subject
  private readonly state$ = new BehaviorSubject<{ n: number }>({ n: 0 });
  // class: observable initializer_call
  stateView = this.state$.asObservable();
  // class: other
  @Input() title = '';
  // class: other
  private readonly retries = 3;
  // class: other
  active = true;
  // class: observable dollar_suffix,initializer_call
  merged$ = this.refresh$.pipe(map(() => 1));
  // class: subject
  clicks$ = new Subject<MouseEvent>();
  // class: other
  handler = () => this.count.set(1);
}
