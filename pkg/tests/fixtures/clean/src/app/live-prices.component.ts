import { ChangeDetectionStrategy, Component, inject } from '@angular/core';
import { AsyncPipe, CurrencyPipe, NgFor } from '@angular/common';
import { PriceFeed } from './price-feed.service';

@Component({
  selector: 'app-live-prices',
  standalone: true,
  imports: [AsyncPipe, CurrencyPipe, NgFor],
  templateUrl: './live-prices.component.html',
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class LivePricesComponent {
  private readonly feed = inject(PriceFeed);
  readonly quotes$ = this.feed.quotes();
  readonly status$ = this.feed.status();
}
